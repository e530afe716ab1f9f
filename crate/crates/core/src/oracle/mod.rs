//! Grover oracles for S-AES key search.
//!
//! Every oracle is built as forward pass, phase gate, then the exact inverse
//! of the forward pass, so the net action on `|key>|0...0>` is a sign flip on
//! exactly the keys that encrypt the plaintext to the ciphertext.

mod b1_leak;
mod double_split;
pub mod expr;
mod full;
mod split;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::blocks::{ByteWires, NibbleWires};
use crate::circuit::{Checkpoint, Circuit, CircuitBuilder, QubitId};
use crate::error::{Error, Result};
use crate::qsim::{read_register, write_register, Emulator, PhasedBasisState, Sign};
use crate::saes::{encrypt_with, solutions_with, Block, Key, KeyNibble, LeakConfig, RoundConstants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleVariant {
    FullBasic,
    B1LeakExact,
    Split,
    DoubleSplit,
}

impl OracleVariant {
    pub const ALL: [OracleVariant; 4] = [
        OracleVariant::FullBasic,
        OracleVariant::B1LeakExact,
        OracleVariant::Split,
        OracleVariant::DoubleSplit,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            OracleVariant::FullBasic => "full",
            OracleVariant::B1LeakExact => "b1-leak",
            OracleVariant::Split => "split",
            OracleVariant::DoubleSplit => "double-split",
        }
    }

    pub fn check_leak(self, leak: &LeakConfig) -> Result<()> {
        let leaked: BTreeSet<KeyNibble> = leak.leaked().collect();
        let b0 = BTreeSet::from([KeyNibble::B0Hi, KeyNibble::B0Lo]);
        let b1 = BTreeSet::from([KeyNibble::B1Hi, KeyNibble::B1Lo]);
        let reason = match self {
            OracleVariant::FullBasic if !leaked.is_empty() => "the full oracle searches every key bit",
            OracleVariant::B1LeakExact if leaked != b1 => "exactly B1^0 and B1^1 must be leaked",
            OracleVariant::Split if leaked != b0 && leaked != b1 => {
                "exactly one full key byte (B0 or B1) must be leaked"
            }
            _ => return Ok(()),
        };
        Err(Error::IncompatibleLeak {
            variant: self,
            leak: leak.clone(),
            reason,
        })
    }
}

impl fmt::Display for OracleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OracleVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<OracleVariant> {
        OracleVariant::ALL
            .into_iter()
            .find(|v| v.name() == s.trim())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown variant `{s}` (expected full, b1-leak, split or double-split)"
                ))
            })
    }
}

impl Serialize for OracleVariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackInstance {
    pub plaintext: Block,
    pub ciphertext: Block,
    pub leak: LeakConfig,
    pub variant: OracleVariant,
}

impl AttackInstance {
    pub fn new(variant: OracleVariant, plaintext: Block, ciphertext: Block, leak: LeakConfig) -> AttackInstance {
        AttackInstance {
            plaintext,
            ciphertext,
            leak,
            variant,
        }
    }

    /// Instance whose ciphertext and leaked values come from a known key.
    pub fn from_key(variant: OracleVariant, plaintext: Block, key: Key, leaked: &[KeyNibble]) -> AttackInstance {
        AttackInstance::new(
            variant,
            plaintext,
            encrypt_with(plaintext, key, RoundConstants::STANDARD),
            LeakConfig::from_key(key, leaked),
        )
    }

    pub fn solutions(&self, rc: RoundConstants) -> Vec<Key> {
        solutions_with(self.plaintext, self.ciphertext, &self.leak, rc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLayout {
    /// Searched key nibbles, canonical order, most significant qubit first.
    pub key_register: Vec<QubitId>,
    pub text_register: Vec<QubitId>,
    pub ancillas: Vec<QubitId>,
    pub total_qubits: usize,
}

/// Everything before the phase gate, plus where the phase gate acts.
#[derive(Clone, Debug)]
pub struct ForwardPass {
    pub circuit: Circuit,
    pub layout: OracleLayout,
    /// Physical qubits the phase gate spans; all ones exactly on a match.
    pub readout: Vec<QubitId>,
}

pub(crate) fn nibble(w: &[QubitId], i: usize) -> NibbleWires {
    crate::blocks::nibble_at(w, i)
}

pub(crate) fn byte(w: &[QubitId], i: usize) -> ByteWires {
    w[8 * i..8 * i + 8].try_into().expect("slice of eight wires")
}

pub(crate) fn block_bits(x: Block) -> Vec<bool> {
    x.0.iter().flat_map(|n| n.bits()).collect()
}

fn register_spec(inst: &AttackInstance) -> Vec<(&'static str, usize)> {
    let key = inst.leak.search_bits();
    let mut spec = Vec::new();
    if key > 0 {
        spec.push(("key", key));
    }
    match inst.variant {
        OracleVariant::FullBasic | OracleVariant::B1LeakExact => spec.push(("text", 16)),
        OracleVariant::Split => {
            let text = if inst.leak.is_leaked(KeyNibble::B0Hi) { 16 } else { 8 };
            spec.extend([("text", text), ("anc", 1)]);
        }
        OracleVariant::DoubleSplit => spec.extend([("text", 4), ("anc", 3)]),
    }
    spec
}

fn forward_builder(inst: &AttackInstance, rc: RoundConstants) -> Result<(CircuitBuilder, OracleLayout, Vec<QubitId>)> {
    inst.variant.check_leak(&inst.leak)?;
    if inst.solutions(rc).is_empty() {
        log::warn!(
            "no key encrypts {} to {} under leak {}; the oracle marks nothing",
            inst.plaintext,
            inst.ciphertext,
            inst.leak
        );
    }
    let mut b = CircuitBuilder::new(&register_spec(inst))?;
    let reg = |b: &CircuitBuilder, name| b.register(name).map(<[_]>::to_vec).unwrap_or_default();
    let (key, text, anc) = (reg(&b, "key"), reg(&b, "text"), reg(&b, "anc"));
    let phase = match inst.variant {
        OracleVariant::FullBasic => full::forward(&mut b, inst, rc, &key, &text)?,
        OracleVariant::B1LeakExact => b1_leak::forward(&mut b, inst, rc, &key, &text)?,
        OracleVariant::Split if inst.leak.is_leaked(KeyNibble::B0Hi) => {
            split::forward_b0_leaked(&mut b, inst, rc, &key, &text, anc[0])?
        }
        OracleVariant::Split => split::forward_b1_leaked(&mut b, inst, rc, &key, &text, anc[0])?,
        OracleVariant::DoubleSplit => double_split::forward(&mut b, inst, rc, &key, &text, &anc)?,
    };
    let layout = OracleLayout {
        key_register: key,
        text_register: text,
        ancillas: anc,
        total_qubits: b.qubit_count(),
    };
    Ok((b, layout, phase))
}

pub fn build_forward(inst: &AttackInstance, rc: RoundConstants) -> Result<ForwardPass> {
    let (b, layout, phase) = forward_builder(inst, rc)?;
    let readout = phase.iter().map(|&q| b.physical(q)).collect();
    Ok(ForwardPass {
        circuit: b.finish(),
        layout,
        readout,
    })
}

pub fn build_oracle(inst: &AttackInstance, rc: RoundConstants) -> Result<(Circuit, OracleLayout)> {
    let (mut b, layout, phase) = forward_builder(inst, rc)?;
    let forward_end = b.checkpoint();
    b.mcz(&phase)?;
    b.append_inverse_between(Checkpoint::default(), forward_end);
    Ok((b.finish(), layout))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub key: Key,
    pub expected_flip: bool,
    pub observed_flip: bool,
    pub restored: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub keys_checked: usize,
    pub flips: Vec<Key>,
    pub solutions: Vec<Key>,
    pub mismatches: Vec<Mismatch>,
    pub registers_restored: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Emulates `circuit` on every basis assignment of `key_register` with all
/// other qubits at zero and compares the sign flips with brute force.
pub fn verify_circuit(
    circuit: &Circuit,
    key_register: &[QubitId],
    inst: &AttackInstance,
    rc: RoundConstants,
) -> Result<VerifyReport> {
    let emu = Emulator::compile(circuit)?;
    let solutions = inst.solutions(rc);
    let expected: BTreeSet<Key> = solutions.iter().copied().collect();
    let space = 1u64 << key_register.len();
    let outcomes: Vec<(Key, bool, bool)> = (0..space)
        .into_par_iter()
        .map(|kappa| {
            let bits = write_register(0, key_register, kappa);
            let out = emu.run(PhasedBasisState::new(circuit.qubit_count(), bits));
            let key = inst.leak.merge(kappa as u32);
            debug_assert_eq!(read_register(bits, key_register), kappa);
            (key, out.phase == Sign::Minus, out.bits == bits)
        })
        .collect();
    let mut flips = Vec::new();
    let mut mismatches = Vec::new();
    for &(key, flipped, restored) in &outcomes {
        if flipped {
            flips.push(key);
        }
        let expected_flip = expected.contains(&key);
        if flipped != expected_flip || !restored {
            mismatches.push(Mismatch {
                key,
                expected_flip,
                observed_flip: flipped,
                restored,
            });
        }
    }
    flips.sort();
    Ok(VerifyReport {
        keys_checked: outcomes.len(),
        flips,
        solutions,
        registers_restored: outcomes.iter().all(|o| o.2),
        mismatches,
    })
}

pub fn verify_oracle(inst: &AttackInstance, rc: RoundConstants) -> Result<VerifyReport> {
    let (circuit, layout) = build_oracle(inst, rc)?;
    verify_circuit(&circuit, &layout.key_register, inst, rc)
}

pub(crate) fn sbox_nibbles(b: &mut CircuitBuilder, w: &[QubitId]) -> Result<()> {
    (0..w.len() / 4).try_for_each(|i| crate::blocks::qc_sbox(b, nibble(w, i)))
}

pub(crate) fn sbox_inv_nibbles(b: &mut CircuitBuilder, w: &[QubitId]) -> Result<()> {
    (0..w.len() / 4).try_for_each(|i| crate::blocks::qc_sbox_inv(b, nibble(w, i)))
}

/// Turns `w` from `x` into `S(R(x)) ^ c` in place, leaving `w` rotated in the frame.
pub(crate) fn sub_rot_const(b: &mut CircuitBuilder, w: ByteWires, c: crate::saes::Byte) -> Result<()> {
    crate::blocks::qc_rotate(b, w)?;
    sbox_nibbles(b, &w)?;
    crate::blocks::qc_add_byte(b, w, c)
}

/// Exact inverse of [`sub_rot_const`].
pub(crate) fn unsub_rot_const(b: &mut CircuitBuilder, w: ByteWires, c: crate::saes::Byte) -> Result<()> {
    crate::blocks::qc_add_byte(b, w, c)?;
    sbox_inv_nibbles(b, &w)?;
    crate::blocks::qc_rotate(b, w)
}
