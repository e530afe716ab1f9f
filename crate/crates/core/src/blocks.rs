//! Quantum circuits for the S-AES primitives.
//!
//! Wire `k` of a nibble or byte carries bit `a_k`, most significant first,
//! matching [`crate::saes`].

use std::fmt;

use crate::circuit::{CircuitBuilder, QubitId};
use crate::error::{Error, Result};
use crate::gf2::{synthesize_cnots, BitMatrix};
use crate::saes::{mix_columns_byte, sbox, Byte, Nibble};

pub type NibbleWires = [QubitId; 4];
pub type ByteWires = [QubitId; 8];

pub fn nibble_at(wires: &[QubitId], index: usize) -> NibbleWires {
    wires[4 * index..4 * index + 4].try_into().expect("slice of four wires")
}

pub fn byte_halves(w: ByteWires) -> [NibbleWires; 2] {
    [nibble_at(&w, 0), nibble_at(&w, 1)]
}

/// `(controls, target)` in time order, wires in a-order.
///
/// The S-box is an odd permutation of the 16 nibbles while X, CNOT and
/// Toffoli on four wires are all even, so one three-control gate is
/// unavoidable. Thirteen gates is the shortest such sequence.
const SBOX_GATES: [(&[usize], usize); 13] = [
    (&[0], 2),
    (&[2], 3),
    (&[3], 0),
    (&[0, 2, 3], 1),
    (&[0, 1], 2),
    (&[3], 1),
    (&[1, 2], 0),
    (&[0, 1], 3),
    (&[], 0),
    (&[3], 2),
    (&[0, 3], 1),
    (&[2, 3], 0),
    (&[0], 3),
];

fn append_sbox_gate(b: &mut CircuitBuilder, w: NibbleWires, (controls, target): (&[usize], usize)) -> Result<()> {
    let controls: Vec<QubitId> = controls.iter().map(|&c| w[c]).collect();
    b.mcx(&controls, w[target])
}

pub fn qc_sbox(b: &mut CircuitBuilder, w: NibbleWires) -> Result<()> {
    SBOX_GATES.iter().try_for_each(|&g| append_sbox_gate(b, w, g))
}

pub fn qc_sbox_inv(b: &mut CircuitBuilder, w: NibbleWires) -> Result<()> {
    SBOX_GATES.iter().rev().try_for_each(|&g| append_sbox_gate(b, w, g))
}

fn vector_to_byte(v: u64) -> u8 {
    (0..8).fold(0, |acc, k| acc | ((((v >> k) & 1) as u8) << (7 - k)))
}

fn byte_to_vector(x: u8) -> u64 {
    (0..8).fold(0, |acc, k| acc | ((((x >> (7 - k)) & 1) as u64) << k))
}

fn nibble_to_vector(n: Nibble) -> u64 {
    (0..4).fold(0, |acc, k| acc | ((n.bit(k) as u64) << k))
}

/// MixColumns over GF(2)^8, coordinate `k` being bit `a_k`.
pub fn mix_columns_matrix() -> BitMatrix {
    BitMatrix::from_linear_fn(8, |v| {
        byte_to_vector(mix_columns_byte(Byte::from_u8(vector_to_byte(v))).to_u8())
    })
}

fn apply_linear(b: &mut CircuitBuilder, m: &BitMatrix, wires: &[QubitId]) -> Result<()> {
    let ops = synthesize_cnots(m).expect("MixColumns blocks are invertible");
    ops.into_iter().try_for_each(|(c, t)| b.cx(wires[c], wires[t]))
}

/// In-place CNOT network for MixColumns on one column.
pub fn qc_mix_columns(b: &mut CircuitBuilder, w: ByteWires) -> Result<()> {
    apply_linear(b, &mix_columns_matrix(), &w)
}

/// One output nibble of MixColumns computed from one input nibble, the other
/// input nibble being known (classically or on separate wires).
///
/// `output` selects which nibble of the result byte is produced and `fixed`
/// which input nibble is not transformed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct McSplit {
    pub output: usize,
    pub fixed: usize,
}

impl McSplit {
    pub const ALL: [McSplit; 4] = [
        McSplit { output: 0, fixed: 0 },
        McSplit { output: 0, fixed: 1 },
        McSplit { output: 1, fixed: 0 },
        McSplit { output: 1, fixed: 1 },
    ];

    pub const fn new(output: usize, fixed: usize) -> McSplit {
        McSplit { output, fixed }
    }

    /// The input nibble that lives on the transformed wires.
    pub const fn moving(self) -> usize {
        1 - self.fixed
    }

    /// Linear part acting on the transformed nibble.
    pub fn linear(self) -> BitMatrix {
        mix_columns_matrix().block(4 * self.output, 4 * self.moving(), 4)
    }

    /// Contribution of the fixed nibble.
    pub fn coupling(self) -> BitMatrix {
        mix_columns_matrix().block(4 * self.output, 4 * self.fixed, 4)
    }
}

impl fmt::Display for McSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MC_{}^{}", self.output, self.fixed)
    }
}

/// Transforms the wires holding the moving nibble into output nibble
/// `v.output`, with the fixed nibble `classical` folded into X gates.
pub fn qc_mc_split(b: &mut CircuitBuilder, v: McSplit, classical: Nibble, w: NibbleWires) -> Result<()> {
    apply_linear(b, &v.linear(), &w)?;
    let offset = v.coupling().apply(nibble_to_vector(classical));
    (0..4).filter(|r| (offset >> r) & 1 == 1).try_for_each(|r| b.x(w[r]))
}

/// Fully quantum form: `held` carries the fixed nibble and is left intact,
/// `transformed` goes from the moving nibble to output nibble `v.output`.
pub fn qc_mc_split_quantum(
    b: &mut CircuitBuilder,
    v: McSplit,
    held: NibbleWires,
    transformed: NibbleWires,
) -> Result<()> {
    if let Some(&q) = held.iter().find(|q| transformed.contains(q)) {
        return Err(Error::OperandOverlap(q));
    }
    apply_linear(b, &v.linear(), &transformed)?;
    let coupling = v.coupling();
    for (r, &t) in transformed.iter().enumerate() {
        for (c, &h) in held.iter().enumerate() {
            if coupling.get(r, c) {
                b.cx(h, t)?;
            }
        }
    }
    Ok(())
}

/// X on `wires[i]` wherever `bits[i]` is set.
pub fn qc_add_classical(b: &mut CircuitBuilder, wires: &[QubitId], bits: &[bool]) -> Result<()> {
    if wires.len() != bits.len() {
        return Err(Error::LengthMismatch {
            left: wires.len(),
            right: bits.len(),
        });
    }
    wires
        .iter()
        .zip(bits)
        .filter(|(_, &bit)| bit)
        .try_for_each(|(&q, _)| b.x(q))
}

pub fn qc_add_nibble(b: &mut CircuitBuilder, w: NibbleWires, n: Nibble) -> Result<()> {
    qc_add_classical(b, &w, &n.bits())
}

pub fn qc_add_byte(b: &mut CircuitBuilder, w: ByteWires, x: Byte) -> Result<()> {
    qc_add_nibble(b, nibble_at(&w, 0), x.hi)?;
    qc_add_nibble(b, nibble_at(&w, 1), x.lo)
}

/// `dst ^= src`, wire by wire.
pub fn qc_add_quantum(b: &mut CircuitBuilder, src: &[QubitId], dst: &[QubitId]) -> Result<()> {
    if src.len() != dst.len() {
        return Err(Error::LengthMismatch {
            left: src.len(),
            right: dst.len(),
        });
    }
    if let Some(&q) = src.iter().find(|q| dst.contains(q)) {
        return Err(Error::OperandOverlap(q));
    }
    src.iter().zip(dst).try_for_each(|(&s, &d)| b.cx(s, d))
}

fn swap_nibbles(b: &mut CircuitBuilder, x: NibbleWires, y: NibbleWires) -> Result<()> {
    let map: Vec<(QubitId, QubitId)> = x.iter().zip(&y).flat_map(|(&p, &q)| [(p, q), (q, p)]).collect();
    b.relabel(&map)
}

/// ShiftRows on a 16-wire text register: nibbles 1 and 3 trade places.
pub fn qc_shift_rows(b: &mut CircuitBuilder, text: &[QubitId]) -> Result<()> {
    if text.len() != 16 {
        return Err(Error::LengthMismatch {
            left: text.len(),
            right: 16,
        });
    }
    swap_nibbles(b, nibble_at(text, 1), nibble_at(text, 3))
}

pub fn qc_rotate(b: &mut CircuitBuilder, w: ByteWires) -> Result<()> {
    swap_nibbles(b, nibble_at(&w, 0), nibble_at(&w, 1))
}

/// Preimage sizes of `n -> n ^ sbox(n)`, largest first.
pub fn sbox_xor_collision_profile() -> Vec<usize> {
    let mut hits = [0usize; 16];
    for v in 0..16 {
        let n = Nibble::from_low_bits(v);
        hits[(n ^ sbox(n)).value() as usize] += 1;
    }
    let mut sizes: Vec<usize> = hits.into_iter().filter(|&h| h > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}
