//! Cross-checks the basis-state emulator against an amplitude simulator.

use num_complex::Complex64;
use serde::Serialize;

use super::{Emulator, PhasedBasisState, SparseState, StateVector};
use crate::circuit::Circuit;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dense,
    Sparse,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub backend: Backend,
    pub inputs: usize,
    /// Inputs whose emulated image and sign differ from the simulated amplitude.
    pub mismatches: Vec<u64>,
    /// Nonzero amplitudes after the run; equals `inputs` for a signed permutation.
    pub support: usize,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.support == self.inputs
    }
}

/// Runs all `inputs` at once as a superposition with distinct real weights,
/// on a dense vector when the circuit fits under `dense_limit` qubits and a
/// sparse map otherwise, and checks that input `i` lands exactly on
/// `sign * weight_i` at the basis state the emulator predicts.
pub fn check_agreement(circuit: &Circuit, inputs: &[u64], dense_limit: usize) -> Result<AgreementReport> {
    let mut inputs = inputs.to_vec();
    inputs.sort_unstable();
    inputs.dedup();
    let emu = Emulator::compile(circuit)?;
    let n = circuit.qubit_count();
    let weight = |i: usize| (i + 1) as f64 / inputs.len() as f64;
    let predicted: Vec<(u64, f64)> = inputs
        .iter()
        .enumerate()
        .map(|(i, &bits)| {
            let out = emu.run(PhasedBasisState::new(n, bits));
            (out.bits, out.phase.to_f64() * weight(i))
        })
        .collect();
    let (backend, lookup, support): (Backend, Box<dyn Fn(u64) -> Complex64>, usize) = if n <= dense_limit {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, &bits) in inputs.iter().enumerate() {
            amps[bits as usize] = Complex64::new(weight(i), 0.0);
        }
        let mut s = StateVector::from_amplitudes(n, amps, dense_limit)?;
        s.run(circuit)?;
        let support = s.amplitudes().iter().filter(|a| a.norm_sqr() != 0.0).count();
        (Backend::Dense, Box::new(move |b| s.amplitude(b)), support)
    } else {
        let mut s = SparseState::new(
            n,
            inputs
                .iter()
                .enumerate()
                .map(|(i, &b)| (b, Complex64::new(weight(i), 0.0))),
        )?;
        s.run(circuit)?;
        let support = s.amplitudes().len();
        (
            Backend::Sparse,
            Box::new(move |b| s.amplitudes().get(&b).copied().unwrap_or_default()),
            support,
        )
    };
    let mismatches = inputs
        .iter()
        .zip(&predicted)
        .filter(|(_, &(bits, amp))| lookup(bits) != Complex64::new(amp, 0.0))
        .map(|(&input, _)| input)
        .collect();
    Ok(AgreementReport {
        backend,
        inputs: inputs.len(),
        mismatches,
        support,
    })
}
