use super::{block_bits, byte, sbox_nibbles, sub_rot_const, unsub_rot_const, AttackInstance};
use crate::blocks::{qc_add_classical, qc_add_quantum, qc_mix_columns, qc_shift_rows};
use crate::circuit::{CircuitBuilder, QubitId};
use crate::error::Result;
use crate::saes::{Byte, RoundConstants};

/// `dst ^= S(R(src)) ^ c` with `src` restored.
fn expand_into(b: &mut CircuitBuilder, dst: [QubitId; 8], src: [QubitId; 8], c: Byte) -> Result<()> {
    sub_rot_const(b, src, Byte::from_u8(0))?;
    qc_add_quantum(b, &src, &dst)?;
    unsub_rot_const(b, src, Byte::from_u8(0))?;
    crate::blocks::qc_add_byte(b, dst, c)
}

/// Both key bytes and the whole state live in qubits; the key register is
/// expanded in place to B2 B3 and then B4 B5.
pub(super) fn forward(
    b: &mut CircuitBuilder,
    inst: &AttackInstance,
    rc: RoundConstants,
    key: &[QubitId],
    text: &[QubitId],
) -> Result<Vec<QubitId>> {
    let (k0, k1) = (byte(key, 0), byte(key, 1));
    qc_add_classical(b, text, &block_bits(inst.plaintext))?;
    qc_add_quantum(b, key, text)?;

    sbox_nibbles(b, text)?;
    qc_shift_rows(b, text)?;
    qc_mix_columns(b, byte(text, 0))?;
    qc_mix_columns(b, byte(text, 1))?;
    expand_into(b, k0, k1, rc.c0)?;
    qc_add_quantum(b, &k0, &k1)?;
    qc_add_quantum(b, key, text)?;

    sbox_nibbles(b, text)?;
    qc_shift_rows(b, text)?;
    expand_into(b, k0, k1, rc.c1)?;
    qc_add_quantum(b, &k0, &k1)?;
    qc_add_quantum(b, key, text)?;

    let mismatch: Vec<bool> = block_bits(inst.ciphertext).iter().map(|&x| !x).collect();
    qc_add_classical(b, text, &mismatch)?;
    Ok(text.to_vec())
}
