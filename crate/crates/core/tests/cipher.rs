use proptest::prelude::*;
use saes_grover::saes::{
    decrypt, encrypt, expand_key, inv_mix_columns, mix_columns, mix_columns_byte, rotate_byte, sbox, solutions,
    sub_byte,
};
use saes_grover::{Block, Byte, Key, KeyNibble, LeakConfig, Nibble, RoundConstants};

const SBOX: [u16; 16] = [9, 4, 10, 11, 13, 1, 8, 5, 6, 2, 0, 3, 12, 14, 15, 7];

/// Textbook S-AES on plain integers, multiplying in GF(16) mod x^4 + x + 1.
mod reference {
    use super::SBOX;

    fn gmul(mut a: u16, mut b: u16) -> u16 {
        let mut p = 0;
        while b != 0 {
            if b & 1 == 1 {
                p ^= a;
            }
            a <<= 1;
            if a & 0x10 != 0 {
                a ^= 0x13;
            }
            b >>= 1;
        }
        p
    }

    fn sub_nib(x: u16, nibbles: u32) -> u16 {
        (0..nibbles).fold(0, |acc, i| acc | SBOX[((x >> (4 * i)) & 15) as usize] << (4 * i))
    }

    fn g(w: u16, rcon: u16) -> u16 {
        let rot = ((w << 4) | (w >> 4)) & 0xFF;
        sub_nib(rot, 2) ^ rcon
    }

    pub fn round_keys(k: u16) -> [u16; 3] {
        let w0 = k >> 8;
        let w1 = k & 0xFF;
        let w2 = w0 ^ g(w1, 0x80);
        let w3 = w2 ^ w1;
        let w4 = w2 ^ g(w3, 0x30);
        let w5 = w4 ^ w3;
        [w0 << 8 | w1, w2 << 8 | w3, w4 << 8 | w5]
    }

    fn shift_rows(s: u16) -> u16 {
        (s & 0xF0F0) | ((s & 0x0F00) >> 8) | ((s & 0x000F) << 8)
    }

    fn mix_columns(s: u16) -> u16 {
        let n = |i: u32| (s >> (12 - 4 * i)) & 15;
        let col = |a: u16, b: u16| (a ^ gmul(4, b), gmul(4, a) ^ b);
        let (o0, o1) = col(n(0), n(1));
        let (o2, o3) = col(n(2), n(3));
        o0 << 12 | o1 << 8 | o2 << 4 | o3
    }

    pub fn encrypt(p: u16, k: u16) -> u16 {
        let [k0, k1, k2] = round_keys(k);
        let s = p ^ k0;
        let s = mix_columns(shift_rows(sub_nib(s, 4))) ^ k1;
        shift_rows(sub_nib(s, 4)) ^ k2
    }
}

#[test]
fn textbook_vector() {
    assert_eq!(
        encrypt(Block::from_u16(0x6F6B), Key::from_u16(0xA73B)),
        Block::from_u16(0x0738)
    );
    assert_eq!(
        decrypt(Block::from_u16(0x0738), Key::from_u16(0xA73B)),
        Block::from_u16(0x6F6B)
    );
}

#[test]
fn pinned_schedules_and_zero_vector() {
    let bytes = |k: u16| {
        expand_key(Key::from_u16(k), RoundConstants::STANDARD)
            .b
            .map(|b| b.to_u8())
    };
    assert_eq!(bytes(0xA73B), [0xA7, 0x3B, 0x1C, 0x27, 0x76, 0x51]);
    assert_eq!(bytes(0x0000), [0x00, 0x00, 0x19, 0x19, 0x0D, 0x14]);
    assert_eq!(encrypt(Block::from_u16(0), Key::from_u16(0)), Block::from_u16(0x071E));
}

#[test]
fn matches_reference_for_every_key() {
    for p in [0x0000u16, 0x6F6B, 0xFFFF, 0x1234] {
        for k in 0..=u16::MAX {
            assert_eq!(
                encrypt(Block::from_u16(p), Key::from_u16(k)).to_u16(),
                reference::encrypt(p, k),
                "p={p:04X} k={k:04X}"
            );
        }
    }
}

#[test]
fn schedule_matches_reference_for_every_key() {
    for k in 0..=u16::MAX {
        let rk = expand_key(Key::from_u16(k), RoundConstants::STANDARD);
        let expected = reference::round_keys(k);
        for (r, &e) in expected.iter().enumerate() {
            assert_eq!(rk.round_key(r).to_u16(), e);
        }
    }
}

#[test]
fn key_schedule_identities_for_every_key() {
    let rc = RoundConstants::STANDARD;
    let sr = |b: Byte| sub_byte(rotate_byte(b));
    for k in 0..=u16::MAX {
        let [b0, b1, b2, b3, b4, b5] = expand_key(Key::from_u16(k), rc).b;
        assert_eq!(b2, rc.c0 ^ b0 ^ sr(b1));
        assert_eq!(b3, b1 ^ b2);
        assert_eq!(b4, rc.c1 ^ b2 ^ sr(b3));
        assert_eq!(b5, b3 ^ b4);
        assert_eq!(b5, rc.c1 ^ b1 ^ sr(b3));
    }
}

#[test]
fn mix_columns_is_linear_and_invertible() {
    for a in 0..=255u8 {
        for b in 0..=255u8 {
            let (x, y) = (Byte::from_u8(a), Byte::from_u8(b));
            assert_eq!(mix_columns_byte(x ^ y), mix_columns_byte(x) ^ mix_columns_byte(y));
        }
    }
    for s in 0..=u16::MAX {
        assert_eq!(inv_mix_columns(mix_columns(Block::from_u16(s))), Block::from_u16(s));
    }
}

#[test]
fn sbox_table() {
    for (i, &v) in SBOX.iter().enumerate() {
        assert_eq!(sbox(Nibble::from_low_bits(i as u8)).value() as u16, v);
    }
}

#[test]
fn sbox_is_an_odd_permutation() {
    // Every X, CNOT or Toffoli on four wires permutes the 16 basis states
    // evenly, so a circuit for this S-box needs a gate with three controls.
    let mut seen = [false; 16];
    let mut transpositions = 0;
    for start in 0..16 {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = SBOX[i] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    assert_eq!(transpositions % 2, 1);
}

#[test]
fn solution_counts_over_all_ciphertexts() {
    // With three nibbles leaked every ciphertext reachable from the 16
    // candidates has at least one solution and the counts sum to 16.
    let p = Block::from_u16(0x6F6B);
    let leak = LeakConfig::from_key(
        Key::from_u16(0xA73B),
        &[KeyNibble::B0Hi, KeyNibble::B0Lo, KeyNibble::B1Hi],
    );
    let total: usize = (0..=u16::MAX)
        .map(|c| solutions(p, Block::from_u16(c), &leak).len())
        .sum();
    assert_eq!(total, 16);
}

#[test]
fn leak_spec_round_trip() {
    let leak: LeakConfig = "B0^0=7,B0^1=3,B1^0=A".parse().unwrap();
    assert_eq!(leak.len(), 3);
    assert_eq!(leak.to_string(), "B0^0=7,B0^1=3,B1^0=A");
    assert_eq!("none".parse::<LeakConfig>().unwrap(), LeakConfig::none());
    for bad in ["B0^0=7,B0^0=7", "B2^0=1", "B0^0=G", "B0^0", "B0^0=12"] {
        assert!(bad.parse::<LeakConfig>().is_err(), "{bad}");
    }
}

proptest! {
    #[test]
    fn round_trip(p in any::<u16>(), k in any::<u16>()) {
        let (p, k) = (Block::from_u16(p), Key::from_u16(k));
        prop_assert_eq!(decrypt(encrypt(p, k), k), p);
    }

    #[test]
    fn merge_inverts_project(k in any::<u16>(), mask in 0u8..16) {
        let key = Key::from_u16(k);
        let leaked: Vec<KeyNibble> = KeyNibble::ALL.into_iter().filter(|p| mask >> p.index() & 1 == 1).collect();
        let leak = LeakConfig::from_key(key, &leaked);
        prop_assert!(leak.is_consistent(key));
        prop_assert_eq!(leak.merge(leak.project(key)), key);
        prop_assert_eq!(leak.search_bits(), 16 - 4 * leaked.len());
    }

    #[test]
    fn true_key_is_always_a_solution(p in any::<u16>(), k in any::<u16>(), mask in 0u8..16) {
        let key = Key::from_u16(k);
        let leaked: Vec<KeyNibble> = KeyNibble::ALL.into_iter().filter(|q| mask >> q.index() & 1 == 1).collect();
        let leak = LeakConfig::from_key(key, &leaked);
        let p = Block::from_u16(p);
        prop_assert!(solutions(p, encrypt(p, key), &leak).contains(&key));
    }

    #[test]
    fn hex_display_round_trip(v in any::<u16>()) {
        let b = Block::from_u16(v);
        prop_assert_eq!(b.to_string().parse::<Block>().unwrap(), b);
        let k = Key::from_u16(v);
        prop_assert_eq!(k.to_string().parse::<Key>().unwrap(), k);
    }
}
