//! Bit-exact classical Simplified AES.
//!
//! Bit order convention used throughout the crate: bit `a0` is the most
//! significant bit of a byte, nibble `N0` is the most significant nibble of a
//! block, and hex strings read left to right from `N0`. Within a nibble the
//! four bits are `a0..a3` (or `a4..a7` for the low nibble of a byte), again
//! most significant first.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Serializes through `Display` and parses back through `FromStr`, so JSON
/// carries the same hex notation as the command line.
macro_rules! serde_via_str {
    ($($ty:ty),*) => {$(
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let text = String::deserialize(d)?;
                text.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}

const SBOX: [u8; 16] = [
    0x9, 0x4, 0xA, 0xB, 0xD, 0x1, 0x8, 0x5, 0x6, 0x2, 0x0, 0x3, 0xC, 0xE, 0xF, 0x7,
];

const INV_SBOX: [u8; 16] = [
    0xA, 0x5, 0x9, 0xB, 0x1, 0x7, 0x8, 0xF, 0x6, 0x0, 0x2, 0x3, 0xC, 0x4, 0xD, 0xE,
];

/// A 4-bit value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nibble(u8);

impl Nibble {
    pub const ZERO: Nibble = Nibble(0);

    pub const fn new(value: u8) -> Option<Nibble> {
        if value < 16 {
            Some(Nibble(value))
        } else {
            None
        }
    }

    /// Keeps the low four bits of `value`.
    pub const fn from_low_bits(value: u8) -> Nibble {
        Nibble(value & 0xF)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    /// Bit `k` of the nibble, `k = 0` being the most significant.
    pub const fn bit(self, k: usize) -> bool {
        (self.0 >> (3 - k)) & 1 == 1
    }

    pub fn bits(self) -> [bool; 4] {
        std::array::from_fn(|k| self.bit(k))
    }

    pub fn complement(self) -> Nibble {
        Nibble(!self.0 & 0xF)
    }
}

impl BitXor for Nibble {
    type Output = Nibble;
    fn bitxor(self, rhs: Nibble) -> Nibble {
        Nibble(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Nibble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:X}", self.0)
    }
}

/// An 8-bit value viewed as two nibbles: `hi` carries `a0..a3`, `lo` carries `a4..a7`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Byte {
    pub hi: Nibble,
    pub lo: Nibble,
}

impl Byte {
    pub const fn new(hi: Nibble, lo: Nibble) -> Byte {
        Byte { hi, lo }
    }

    pub const fn from_u8(v: u8) -> Byte {
        Byte {
            hi: Nibble(v >> 4),
            lo: Nibble(v & 0xF),
        }
    }

    pub const fn to_u8(self) -> u8 {
        (self.hi.0 << 4) | self.lo.0
    }

    /// Nibble 0 is `hi`, nibble 1 is `lo`.
    pub fn nibble(self, index: usize) -> Nibble {
        match index {
            0 => self.hi,
            1 => self.lo,
            _ => panic!("byte nibble index {index} out of range"),
        }
    }

    /// Bit `a_k` of the byte, `k = 0` being the most significant.
    pub const fn bit(self, k: usize) -> bool {
        (self.to_u8() >> (7 - k)) & 1 == 1
    }
}

impl BitXor for Byte {
    type Output = Byte;
    fn bitxor(self, rhs: Byte) -> Byte {
        Byte::from_u8(self.to_u8() ^ rhs.to_u8())
    }
}

impl fmt::Display for Byte {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02X}", self.to_u8())
    }
}

/// A 16-bit cipher state `[N0, N1, N2, N3]`; column 0 is `(N0, N1)`, column 1 is `(N2, N3)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(pub [Nibble; 4]);

impl Block {
    pub const fn from_u16(v: u16) -> Block {
        Block([
            Nibble((v >> 12) as u8 & 0xF),
            Nibble((v >> 8) as u8 & 0xF),
            Nibble((v >> 4) as u8 & 0xF),
            Nibble(v as u8 & 0xF),
        ])
    }

    pub const fn to_u16(self) -> u16 {
        ((self.0[0].0 as u16) << 12) | ((self.0[1].0 as u16) << 8) | ((self.0[2].0 as u16) << 4) | self.0[3].0 as u16
    }

    pub fn nibble(self, index: usize) -> Nibble {
        self.0[index]
    }

    pub fn column(self, index: usize) -> Byte {
        Byte::new(self.0[2 * index], self.0[2 * index + 1])
    }

    pub fn from_columns(c0: Byte, c1: Byte) -> Block {
        Block([c0.hi, c0.lo, c1.hi, c1.lo])
    }

    /// XORs nibble `nibble_index` of `key` into nibble `position` of the block,
    /// keeping bit correspondence.
    pub fn xor_nibble(self, position: usize, key: Byte, nibble_index: usize) -> Block {
        let mut out = self;
        out.0[position] = out.0[position] ^ key.nibble(nibble_index);
        out
    }
}

impl BitXor for Block {
    type Output = Block;
    fn bitxor(self, rhs: Block) -> Block {
        Block::from_u16(self.to_u16() ^ rhs.to_u16())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04X}", self.to_u16())
    }
}

fn parse_hex16(s: &str) -> Result<u16> {
    let s = s.trim();
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    if digits.len() != 4 || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(Error::Parse(format!("expected exactly 4 hex digits, got `{s}`")));
    }
    u16::from_str_radix(digits, 16).map_err(|e| Error::Parse(e.to_string()))
}

impl FromStr for Block {
    type Err = Error;
    fn from_str(s: &str) -> Result<Block> {
        parse_hex16(s).map(Block::from_u16)
    }
}

/// Positions of the four key nibbles: `B0^0, B0^1, B1^0, B1^1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KeyNibble {
    B0Hi,
    B0Lo,
    B1Hi,
    B1Lo,
}

impl KeyNibble {
    pub const ALL: [KeyNibble; 4] = [KeyNibble::B0Hi, KeyNibble::B0Lo, KeyNibble::B1Hi, KeyNibble::B1Lo];

    /// Position in the 16-bit key, 0 being the most significant nibble.
    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(i: usize) -> KeyNibble {
        KeyNibble::ALL[i]
    }

    pub const fn label(self) -> &'static str {
        match self {
            KeyNibble::B0Hi => "B0^0",
            KeyNibble::B0Lo => "B0^1",
            KeyNibble::B1Hi => "B1^0",
            KeyNibble::B1Lo => "B1^1",
        }
    }
}

impl fmt::Display for KeyNibble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for KeyNibble {
    type Err = Error;
    fn from_str(s: &str) -> Result<KeyNibble> {
        KeyNibble::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown key nibble `{s}`")))
    }
}

/// The 16-bit cipher key `B0 B1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub b0: Byte,
    pub b1: Byte,
}

impl Key {
    pub const fn from_u16(v: u16) -> Key {
        Key {
            b0: Byte::from_u8((v >> 8) as u8),
            b1: Byte::from_u8(v as u8),
        }
    }

    pub const fn to_u16(self) -> u16 {
        ((self.b0.to_u8() as u16) << 8) | self.b1.to_u8() as u16
    }

    pub fn nibble(self, pos: KeyNibble) -> Nibble {
        match pos {
            KeyNibble::B0Hi => self.b0.hi,
            KeyNibble::B0Lo => self.b0.lo,
            KeyNibble::B1Hi => self.b1.hi,
            KeyNibble::B1Lo => self.b1.lo,
        }
    }

    pub fn with_nibble(self, pos: KeyNibble, n: Nibble) -> Key {
        let mut k = self;
        match pos {
            KeyNibble::B0Hi => k.b0.hi = n,
            KeyNibble::B0Lo => k.b0.lo = n,
            KeyNibble::B1Hi => k.b1.hi = n,
            KeyNibble::B1Lo => k.b1.lo = n,
        }
        k
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04X}", self.to_u16())
    }
}

impl FromStr for Key {
    type Err = Error;
    fn from_str(s: &str) -> Result<Key> {
        parse_hex16(s).map(Key::from_u16)
    }
}

/// The six expanded round-key bytes `B0..B5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundKeys {
    pub b: [Byte; 6],
}

impl RoundKeys {
    /// The 16-bit key added after `round` (0, 1 or 2).
    pub fn round_key(&self, round: usize) -> Block {
        Block::from_columns(self.b[2 * round], self.b[2 * round + 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundConstants {
    pub c0: Byte,
    pub c1: Byte,
}

impl RoundConstants {
    /// The constants of the standard S-AES key schedule.
    pub const STANDARD: RoundConstants = RoundConstants {
        c0: Byte::from_u8(0x80),
        c1: Byte::from_u8(0x30),
    };
}

impl Default for RoundConstants {
    fn default() -> Self {
        RoundConstants::STANDARD
    }
}

pub fn sbox(n: Nibble) -> Nibble {
    Nibble(SBOX[n.0 as usize])
}

pub fn inv_sbox(n: Nibble) -> Nibble {
    Nibble(INV_SBOX[n.0 as usize])
}

pub fn sub_byte(b: Byte) -> Byte {
    Byte::new(sbox(b.hi), sbox(b.lo))
}

pub fn sub_nibbles(s: Block) -> Block {
    Block(s.0.map(sbox))
}

pub fn inv_sub_nibbles(s: Block) -> Block {
    Block(s.0.map(inv_sbox))
}

pub fn rotate_byte(b: Byte) -> Byte {
    Byte::new(b.lo, b.hi)
}

pub fn shift_rows(s: Block) -> Block {
    Block([s.0[0], s.0[3], s.0[2], s.0[1]])
}

/// MixColumns on one column, written out bit by bit.
pub fn mix_columns_byte(a: Byte) -> Byte {
    let x = a.to_u8();
    let a = |k: usize| (x >> (7 - k)) & 1;
    let out = [
        a(0) ^ a(6),
        a(1) ^ a(4) ^ a(7),
        a(2) ^ a(4) ^ a(5),
        a(3) ^ a(5),
        a(4) ^ a(2),
        a(5) ^ a(3) ^ a(0),
        a(6) ^ a(1) ^ a(0),
        a(7) ^ a(1),
    ];
    Byte::from_u8(out.iter().fold(0, |acc, &bit| (acc << 1) | bit))
}

fn inv_mix_table() -> &'static [u8; 256] {
    static TABLE: OnceLock<[u8; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u8; 256];
        for x in 0..=255u8 {
            t[mix_columns_byte(Byte::from_u8(x)).to_u8() as usize] = x;
        }
        t
    })
}

pub fn inv_mix_columns_byte(a: Byte) -> Byte {
    Byte::from_u8(inv_mix_table()[a.to_u8() as usize])
}

pub fn mix_columns(s: Block) -> Block {
    Block::from_columns(mix_columns_byte(s.column(0)), mix_columns_byte(s.column(1)))
}

pub fn inv_mix_columns(s: Block) -> Block {
    Block::from_columns(inv_mix_columns_byte(s.column(0)), inv_mix_columns_byte(s.column(1)))
}

pub fn expand_key(k: Key, rc: RoundConstants) -> RoundKeys {
    let b0 = k.b0;
    let b1 = k.b1;
    let b2 = rc.c0 ^ b0 ^ sub_byte(rotate_byte(b1));
    let b3 = b1 ^ b2;
    let b4 = rc.c1 ^ b2 ^ sub_byte(rotate_byte(b3));
    let b5 = b3 ^ b4;
    RoundKeys {
        b: [b0, b1, b2, b3, b4, b5],
    }
}

pub fn encrypt_with(p: Block, k: Key, rc: RoundConstants) -> Block {
    let rk = expand_key(k, rc);
    let s = p ^ rk.round_key(0);
    let s = mix_columns(shift_rows(sub_nibbles(s))) ^ rk.round_key(1);
    shift_rows(sub_nibbles(s)) ^ rk.round_key(2)
}

pub fn decrypt_with(c: Block, k: Key, rc: RoundConstants) -> Block {
    let rk = expand_key(k, rc);
    let s = inv_sub_nibbles(shift_rows(c ^ rk.round_key(2)));
    let s = inv_sub_nibbles(shift_rows(inv_mix_columns(s ^ rk.round_key(1))));
    s ^ rk.round_key(0)
}

pub fn encrypt(p: Block, k: Key) -> Block {
    encrypt_with(p, k, RoundConstants::STANDARD)
}

pub fn decrypt(c: Block, k: Key) -> Block {
    decrypt_with(c, k, RoundConstants::STANDARD)
}

/// Side-channel knowledge of some key nibbles.
///
/// The unleaked nibbles, in `B0^0, B0^1, B1^0, B1^1` order, form the searched
/// key register; a register value `kappa` packs them most significant first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LeakConfig {
    values: BTreeMap<KeyNibble, Nibble>,
}

impl LeakConfig {
    pub fn none() -> LeakConfig {
        LeakConfig::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (KeyNibble, Nibble)>) -> LeakConfig {
        LeakConfig {
            values: pairs.into_iter().collect(),
        }
    }

    /// Leaks the given positions with their values taken from `key`.
    pub fn from_key(key: Key, positions: &[KeyNibble]) -> LeakConfig {
        LeakConfig::from_pairs(positions.iter().map(|&p| (p, key.nibble(p))))
    }

    pub fn with(mut self, pos: KeyNibble, value: Nibble) -> LeakConfig {
        self.values.insert(pos, value);
        self
    }

    pub fn get(&self, pos: KeyNibble) -> Option<Nibble> {
        self.values.get(&pos).copied()
    }

    pub fn is_leaked(&self, pos: KeyNibble) -> bool {
        self.values.contains_key(&pos)
    }

    pub fn leaked(&self) -> impl Iterator<Item = KeyNibble> + '_ {
        self.values.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn searched(&self) -> Vec<KeyNibble> {
        KeyNibble::ALL.into_iter().filter(|p| !self.is_leaked(*p)).collect()
    }

    pub fn search_bits(&self) -> usize {
        4 * (4 - self.values.len())
    }

    pub fn is_consistent(&self, key: Key) -> bool {
        self.values.iter().all(|(&p, &v)| key.nibble(p) == v)
    }

    /// Builds the full key from a searched-register value.
    pub fn merge(&self, kappa: u32) -> Key {
        let searched = self.searched();
        let mut key = Key::default();
        for (&p, &v) in &self.values {
            key = key.with_nibble(p, v);
        }
        let n = searched.len();
        for (i, &p) in searched.iter().enumerate() {
            let shift = 4 * (n - 1 - i);
            key = key.with_nibble(p, Nibble::from_low_bits((kappa >> shift) as u8));
        }
        key
    }

    /// Inverse of [`LeakConfig::merge`] on the searched nibbles.
    pub fn project(&self, key: Key) -> u32 {
        self.searched()
            .into_iter()
            .fold(0, |acc, p| (acc << 4) | key.nibble(p).value() as u32)
    }

    pub fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        (0..1u32 << self.search_bits()).map(move |kappa| self.merge(kappa))
    }
}

impl fmt::Display for LeakConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return f.write_str("none");
        }
        let parts: Vec<String> = self.values.iter().map(|(p, v)| format!("{p}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LeakConfig {
    type Err = Error;

    /// Grammar: comma-separated `POSITION=HEXDIGIT`, e.g. `B0^0=7,B1^1=A`.
    /// The empty string and `none` denote no leak.
    fn from_str(s: &str) -> Result<LeakConfig> {
        let s = s.trim();
        let mut leak = LeakConfig::none();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(leak);
        }
        for part in s.split(',') {
            let (pos, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("leak entry `{part}` lacks `=`")))?;
            let pos: KeyNibble = pos.parse()?;
            let val: Nibble = val.parse()?;
            if leak.is_leaked(pos) {
                return Err(Error::Parse(format!("{pos} leaked twice")));
            }
            leak = leak.with(pos, val);
        }
        Ok(leak)
    }
}

impl FromStr for Nibble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Nibble> {
        let s = s.trim();
        match s.chars().collect::<Vec<_>>().as_slice() {
            [c] if c.is_ascii_hexdigit() => Ok(Nibble(c.to_digit(16).unwrap() as u8)),
            _ => Err(Error::Parse(format!("`{s}` is not a single hex digit"))),
        }
    }
}

serde_via_str!(Nibble, Block, Key, LeakConfig);

/// Every key consistent with `leak` that encrypts `p` to `c`, ascending.
pub fn solutions_with(p: Block, c: Block, leak: &LeakConfig, rc: RoundConstants) -> Vec<Key> {
    leak.keys().filter(|&k| encrypt_with(p, k, rc) == c).collect()
}

pub fn solutions(p: Block, c: Block, leak: &LeakConfig) -> Vec<Key> {
    solutions_with(p, c, leak, RoundConstants::STANDARD)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_vector() {
        let k = Key::from_u16(0xA73B);
        let rk = expand_key(k, RoundConstants::STANDARD);
        let bytes: Vec<u8> = rk.b.iter().map(|b| b.to_u8()).collect();
        assert_eq!(bytes, vec![0xA7, 0x3B, 0x1C, 0x27, 0x76, 0x51]);
        assert_eq!(encrypt(Block::from_u16(0x6F6B), k), Block::from_u16(0x0738));
        assert_eq!(decrypt(Block::from_u16(0x0738), k), Block::from_u16(0x6F6B));
    }

    #[test]
    fn zero_key_schedule() {
        // Worked by hand: S(R(00)) = 99, B2 = 80^99 = 19, S(R(19)) = S(91) = 24,
        // B4 = 30^19^24 = 0D, B5 = 19^0D = 14.
        let rk = expand_key(Key::from_u16(0), RoundConstants::STANDARD);
        let bytes: Vec<u8> = rk.b.iter().map(|b| b.to_u8()).collect();
        assert_eq!(bytes, vec![0x00, 0x00, 0x19, 0x19, 0x0D, 0x14]);
    }

    #[test]
    fn sbox_is_a_permutation_and_inverse() {
        let mut seen = [false; 16];
        for v in 0..16 {
            let n = Nibble::new(v).unwrap();
            seen[sbox(n).value() as usize] = true;
            assert_eq!(inv_sbox(sbox(n)), n);
            assert_eq!(sbox(inv_sbox(n)), n);
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn sbox_is_not_linear() {
        let witness = (0..16u8).flat_map(|x| (0..16u8).map(move |y| (x, y))).find(|&(x, y)| {
            let (x, y) = (Nibble(x), Nibble(y));
            sbox(x ^ y) != sbox(x) ^ sbox(y)
        });
        assert!(witness.is_some());
    }

    #[test]
    fn mix_columns_bit_a0() {
        assert_eq!(mix_columns_byte(Byte::from_u8(0)), Byte::from_u8(0));
        // a0 feeds a0', a5', a6'
        assert_eq!(mix_columns_byte(Byte::from_u8(0b1000_0000)).to_u8(), 0b1000_0110);
    }

    #[test]
    fn mix_columns_columns_are_independent() {
        let s = Block::from_u16(0x00A7);
        assert_eq!(mix_columns(s).column(0), Byte::from_u8(0));
        let s = Block::from_u16(0x3C5E);
        assert_eq!(mix_columns(s).column(0), mix_columns_byte(s.column(0)));
        assert_eq!(mix_columns(s).column(1), mix_columns_byte(s.column(1)));
    }

    #[test]
    fn shift_rows_and_rotate() {
        assert_eq!(shift_rows(Block::from_u16(0x0123)), Block::from_u16(0x0321));
        assert_eq!(rotate_byte(Byte::from_u8(0xA3)), Byte::from_u8(0x3A));
        assert_eq!(rotate_byte(Byte::from_u8(0x55)), Byte::from_u8(0x55));
        assert_eq!(shift_rows(Block::from_u16(0x1727)), Block::from_u16(0x1727));
    }

    #[test]
    fn block_of_equal_nibbles() {
        let s = sub_nibbles(Block::from_u16(0x7777));
        assert_eq!(s, Block::from_u16(0x5555));
    }

    #[test]
    fn xor_nibble_keeps_bit_correspondence() {
        let b = Block::from_u16(0x0000).xor_nibble(1, Byte::from_u8(0xC5), 1);
        assert_eq!(b, Block::from_u16(0x0500));
    }

    #[test]
    fn hex_parsing() {
        assert_eq!("6F6B".parse::<Block>().unwrap(), Block::from_u16(0x6F6B));
        assert_eq!("0xa73b".parse::<Key>().unwrap(), Key::from_u16(0xA73B));
        assert!("XYZ".parse::<Key>().is_err());
        assert!("12345".parse::<Block>().is_err());
    }

    #[test]
    fn leak_grammar_round_trip() {
        let leak: LeakConfig = "B0^0=7,B0^1=3,B1^0=a".parse().unwrap();
        assert_eq!(leak.len(), 3);
        assert_eq!(leak.get(KeyNibble::B1Hi), Some(Nibble(0xA)));
        assert_eq!(leak.to_string(), "B0^0=7,B0^1=3,B1^0=A");
        assert_eq!(leak.to_string().parse::<LeakConfig>().unwrap(), leak);
        assert!("none".parse::<LeakConfig>().unwrap().is_empty());
        assert!("B2^0=1".parse::<LeakConfig>().is_err());
        assert!("B0^0=10".parse::<LeakConfig>().is_err());
        assert!("B0^0=1,B0^0=2".parse::<LeakConfig>().is_err());
    }

    #[test]
    fn merge_and_project() {
        let leak = LeakConfig::none().with(KeyNibble::B0Lo, Nibble(0xC));
        let key = leak.merge(0xABD);
        assert_eq!(key, Key::from_u16(0xACBD));
        assert_eq!(leak.project(key), 0xABD);
        assert_eq!(leak.keys().count(), 4096);
    }

    #[test]
    fn full_leak_yields_single_candidate() {
        let key = Key::from_u16(0x2D55);
        let p = Block::from_u16(0x1234);
        let c = encrypt(p, key);
        let leak = LeakConfig::from_key(key, &KeyNibble::ALL);
        assert_eq!(solutions(p, c, &leak), vec![key]);
    }
}
