use super::{block_bits, byte, sbox_nibbles, sub_rot_const, unsub_rot_const, AttackInstance};
use crate::blocks::{qc_add_byte, qc_add_classical, qc_add_quantum, qc_mix_columns, qc_shift_rows};
use crate::circuit::{CircuitBuilder, QubitId};
use crate::error::Result;
use crate::saes::{rotate_byte, sub_byte, Byte, KeyNibble, RoundConstants};

/// B1 is known, so the 8-qubit key register holds B0 and is walked through
/// B2 and B3 by X gates alone. B4 is never formed: `S(R(B3)) ^ C1` is added
/// to the whole state and the remaining B2 and B1 terms are added afterwards.
pub(super) fn forward(
    b: &mut CircuitBuilder,
    inst: &AttackInstance,
    rc: RoundConstants,
    key: &[QubitId],
    text: &[QubitId],
) -> Result<Vec<QubitId>> {
    let b1 = Byte::new(
        inst.leak.get(KeyNibble::B1Hi).expect("B1 is leaked"),
        inst.leak.get(KeyNibble::B1Lo).expect("B1 is leaked"),
    );
    let k: [QubitId; 8] = key.try_into().expect("eight key qubits");
    let (col0, col1) = (byte(text, 0), byte(text, 1));

    qc_add_classical(b, text, &block_bits(inst.plaintext))?;
    qc_add_quantum(b, &k, &col0)?;
    qc_add_byte(b, col1, b1)?;

    sbox_nibbles(b, text)?;
    qc_shift_rows(b, text)?;
    qc_mix_columns(b, col0)?;
    qc_mix_columns(b, col1)?;
    qc_add_byte(b, k, rc.c0 ^ sub_byte(rotate_byte(b1)))?;
    qc_add_quantum(b, &k, &col0)?;
    qc_add_byte(b, k, b1)?;
    qc_add_quantum(b, &k, &col1)?;

    sbox_nibbles(b, text)?;
    qc_shift_rows(b, text)?;
    sub_rot_const(b, k, rc.c1)?;
    qc_add_quantum(b, &k, &col0)?;
    qc_add_quantum(b, &k, &col1)?;
    unsub_rot_const(b, k, rc.c1)?;
    qc_add_byte(b, k, b1)?;
    qc_add_quantum(b, &k, &col0)?;
    qc_add_byte(b, col1, b1)?;

    let mismatch: Vec<bool> = block_bits(inst.ciphertext).iter().map(|&x| !x).collect();
    qc_add_classical(b, text, &mismatch)?;
    Ok(text.to_vec())
}
