//! Ciphertext nibbles are produced two at a time. Nibbles 0 and 1 are
//! compared into an ancilla, the state is rolled back to just before
//! MixColumns, and nibbles 2 and 3 are produced on the same wires.

use super::{nibble, sub_rot_const, unsub_rot_const, AttackInstance};
use crate::blocks::{
    qc_add_byte, qc_add_nibble, qc_add_quantum, qc_mc_split, qc_sbox, qc_shift_rows, McSplit, NibbleWires,
};
use crate::circuit::{CircuitBuilder, QubitId};
use crate::error::Result;
use crate::saes::{rotate_byte, sbox, sub_byte, Byte, KeyNibble, Nibble, RoundConstants};

fn leaked_byte(inst: &AttackInstance, hi: KeyNibble, lo: KeyNibble) -> Byte {
    Byte::new(
        inst.leak.get(hi).expect("leaked byte"),
        inst.leak.get(lo).expect("leaked byte"),
    )
}

fn wires(hi: NibbleWires, lo: NibbleWires) -> [QubitId; 8] {
    [hi[0], hi[1], hi[2], hi[3], lo[0], lo[1], lo[2], lo[3]]
}

fn add(b: &mut CircuitBuilder, src: NibbleWires, dst: NibbleWires) -> Result<()> {
    qc_add_quantum(b, &src, &dst)
}

fn compare(b: &mut CircuitBuilder, w: NibbleWires, expected: Nibble) -> Result<()> {
    qc_add_nibble(b, w, expected.complement())
}

/// B0 leaked: 8 key qubits hold B1, the text register is 16 qubits of which
/// the two nibbles that are classical after round 1 later host a scratch
/// byte for B3 and B5.
pub(super) fn forward_b0_leaked(
    b: &mut CircuitBuilder,
    inst: &AttackInstance,
    rc: RoundConstants,
    key: &[QubitId],
    text: &[QubitId],
    anc: QubitId,
) -> Result<Vec<QubitId>> {
    let b0 = leaked_byte(inst, KeyNibble::B0Hi, KeyNibble::B0Lo);
    let p = inst.plaintext;
    let c = inst.ciphertext;
    let k: [QubitId; 8] = key.try_into().expect("eight key qubits");
    let (khi, klo) = (nibble(&k, 0), nibble(&k, 1));
    let s0 = sbox(p.nibble(0) ^ b0.hi);
    let s1 = sbox(p.nibble(1) ^ b0.lo);

    add(b, khi, nibble(text, 2))?;
    add(b, klo, nibble(text, 3))?;
    qc_add_nibble(b, nibble(text, 2), p.nibble(2))?;
    qc_add_nibble(b, nibble(text, 3), p.nibble(3))?;
    qc_sbox(b, nibble(text, 2))?;
    qc_sbox(b, nibble(text, 3))?;
    qc_shift_rows(b, text)?;

    // After ShiftRows the state is (s0, s3 | s2, s1) with s0 and s1 known.
    let (n1, n2) = (nibble(text, 1), nibble(text, 2));
    let f = wires(nibble(text, 0), nibble(text, 3));
    let (fhi, flo) = (nibble(&f, 0), nibble(&f, 1));
    let key_to_b2 = |b: &mut CircuitBuilder| -> Result<()> {
        qc_add_quantum(b, &k, &f)?;
        sub_rot_const(b, k, rc.c0 ^ b0)?;
        qc_add_quantum(b, &k, &f)
    };
    let mark = b.checkpoint();

    qc_mc_split(b, McSplit::new(0, 0), s0, n1)?;
    qc_mc_split(b, McSplit::new(1, 1), s1, n2)?;
    key_to_b2(b)?;
    add(b, khi, n1)?;
    add(b, flo, n2)?;
    qc_sbox(b, n1)?;
    qc_sbox(b, n2)?;
    sub_rot_const(b, f, rc.c1)?;
    qc_add_quantum(b, &f, &k)?;
    add(b, khi, n1)?;
    add(b, klo, n2)?;
    compare(b, n1, c.nibble(0))?;
    compare(b, n2, c.nibble(1))?;
    let computed = b.checkpoint();
    b.mcx(&[n1, n2].concat(), anc)?;
    b.append_inverse_between(mark, computed);

    qc_mc_split(b, McSplit::new(1, 0), s0, n1)?;
    qc_mc_split(b, McSplit::new(0, 1), s1, n2)?;
    key_to_b2(b)?;
    add(b, klo, n1)?;
    add(b, fhi, n2)?;
    qc_sbox(b, n1)?;
    qc_sbox(b, n2)?;
    sub_rot_const(b, f, rc.c1)?;
    qc_add_quantum(b, &f, &k)?;
    unsub_rot_const(b, f, rc.c1)?;
    qc_add_quantum(b, &k, &f)?;
    add(b, fhi, n2)?;
    add(b, flo, n1)?;
    compare(b, n2, c.nibble(2))?;
    compare(b, n1, c.nibble(3))?;
    Ok([&n1[..], &n2[..], &[anc]].concat())
}

/// B1 leaked: 8 key qubits hold B0 and only the two round-1 nibbles that
/// depend on B0 are quantum, so the text register shrinks to 8 qubits.
pub(super) fn forward_b1_leaked(
    b: &mut CircuitBuilder,
    inst: &AttackInstance,
    rc: RoundConstants,
    key: &[QubitId],
    text: &[QubitId],
    anc: QubitId,
) -> Result<Vec<QubitId>> {
    let b1 = leaked_byte(inst, KeyNibble::B1Hi, KeyNibble::B1Lo);
    let p = inst.plaintext;
    let c = inst.ciphertext;
    let k: [QubitId; 8] = key.try_into().expect("eight key qubits");
    let (khi, klo) = (nibble(&k, 0), nibble(&k, 1));
    let (a, bw) = (nibble(text, 0), nibble(text, 1));
    let s2 = sbox(p.nibble(2) ^ b1.hi);
    let s3 = sbox(p.nibble(3) ^ b1.lo);
    let b0_to_b2 = rc.c0 ^ sub_byte(rotate_byte(b1));

    add(b, khi, a)?;
    add(b, klo, bw)?;
    qc_add_nibble(b, a, p.nibble(0))?;
    qc_add_nibble(b, bw, p.nibble(1))?;
    qc_sbox(b, a)?;
    qc_sbox(b, bw)?;
    // After ShiftRows the state is (s0, s3 | s2, s1): `a` holds s0, `bw` s1.
    let mark = b.checkpoint();

    qc_mc_split(b, McSplit::new(0, 1), s3, a)?;
    qc_mc_split(b, McSplit::new(1, 0), s2, bw)?;
    qc_add_byte(b, k, b0_to_b2)?;
    add(b, khi, a)?;
    qc_add_byte(b, k, b1)?;
    add(b, klo, bw)?;
    qc_sbox(b, a)?;
    qc_sbox(b, bw)?;
    sub_rot_const(b, k, rc.c1)?;
    add(b, khi, a)?;
    add(b, klo, bw)?;
    unsub_rot_const(b, k, rc.c1)?;
    qc_add_byte(b, k, b1)?;
    add(b, khi, a)?;
    add(b, klo, bw)?;
    compare(b, a, c.nibble(0))?;
    compare(b, bw, c.nibble(1))?;
    let computed = b.checkpoint();
    b.mcx(&[a, bw].concat(), anc)?;
    b.append_inverse_between(mark, computed);

    qc_mc_split(b, McSplit::new(1, 1), s3, a)?;
    qc_mc_split(b, McSplit::new(0, 0), s2, bw)?;
    qc_add_byte(b, k, b0_to_b2)?;
    add(b, klo, a)?;
    qc_add_byte(b, k, b1)?;
    add(b, khi, bw)?;
    qc_sbox(b, a)?;
    qc_sbox(b, bw)?;
    sub_rot_const(b, k, rc.c1)?;
    add(b, khi, bw)?;
    add(b, klo, a)?;
    unsub_rot_const(b, k, rc.c1)?;
    qc_add_nibble(b, bw, b1.hi)?;
    qc_add_nibble(b, a, b1.lo)?;
    compare(b, bw, c.nibble(2))?;
    compare(b, a, c.nibble(3))?;
    Ok([&a[..], &bw[..], &[anc]].concat())
}
