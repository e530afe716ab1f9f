use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::read_register;
use crate::circuit::{Circuit, Gate, QubitId};
use crate::error::{Error, Result};

/// 2^26 amplitudes of 16 bytes each, 1 GiB.
pub const DEFAULT_QUBIT_LIMIT: usize = 26;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementOutcome {
    pub bits: u64,
    pub probability: f64,
}

/// Dense state over `n` qubits, amplitude `i` belonging to basis index `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// Calls `f` on every index whose bits at `fixed` (sorted, distinct) equal
/// those of `base`, in increasing order.
/// Calls `f(start, len)` for every maximal run of consecutive indices whose
/// bits at the sorted positions `fixed` equal those of `base`.
#[inline]
fn for_each_run(n: usize, fixed: &[usize], base: usize, mut f: impl FnMut(usize, usize)) {
    let low = fixed.first().copied().unwrap_or(n);
    let len = 1usize << low;
    let free = n - fixed.len() - low;
    for j in 0..1usize << free {
        let mut idx = j << low;
        for &p in fixed {
            idx = ((idx >> p) << (p + 1)) | (idx & ((1 << p) - 1));
        }
        f(idx | base, len);
    }
}

fn mask_of(qubits: impl IntoIterator<Item = QubitId>) -> usize {
    qubits.into_iter().fold(0, |m, q| m | (1 << q))
}

fn sorted(qubits: impl IntoIterator<Item = QubitId>) -> Vec<usize> {
    let mut v: Vec<_> = qubits.into_iter().collect();
    v.sort_unstable();
    v
}

impl StateVector {
    /// Basis state `basis` on `n` qubits, within the default guard.
    pub fn new(n: usize, basis: u64) -> Result<StateVector> {
        StateVector::with_limit(n, basis, DEFAULT_QUBIT_LIMIT)
    }

    pub fn with_limit(n: usize, basis: u64, limit: usize) -> Result<StateVector> {
        if n > limit || n >= usize::BITS as usize {
            return Err(Error::TooManyQubits { requested: n, limit });
        }
        if n < 64 && basis >> n != 0 {
            return Err(Error::Parse(format!(
                "basis index {basis:#x} does not fit in {n} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[basis as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>, limit: usize) -> Result<StateVector> {
        if n > limit || n >= usize::BITS as usize {
            return Err(Error::TooManyQubits { requested: n, limit });
        }
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch {
                left: amps.len(),
                right: 1 << n,
            });
        }
        Ok(StateVector { n, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        let n = self.n;
        let amps = &mut self.amps;
        match gate {
            Gate::X(_) | Gate::Cx { .. } | Gate::Ccx { .. } | Gate::Mcx { .. } => {
                let flip = 1 << gate.target().expect("x-type gates have a target");
                let fixed = sorted(gate.qubits());
                let base = mask_of(gate.controls().iter().copied());
                for_each_run(n, &fixed, base, |start, len| {
                    let (lo, hi) = amps.split_at_mut(start + flip);
                    lo[start..start + len].swap_with_slice(&mut hi[..len]);
                });
            }
            Gate::Z(_) | Gate::Mcz(_) => {
                let fixed = sorted(gate.qubits());
                let base = mask_of(gate.qubits());
                for_each_run(n, &fixed, base, |start, len| {
                    amps[start..start + len].iter_mut().for_each(|a| *a = -*a);
                });
            }
            Gate::H(t) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let flip = 1 << t;
                for_each_run(n, &[*t], 0, |start, len| {
                    let (lo, hi) = amps.split_at_mut(start + flip);
                    for (a, b) in lo[start..start + len].iter_mut().zip(&mut hi[..len]) {
                        (*a, *b) = ((*a + *b) * s, (*a - *b) * s);
                    }
                });
            }
        }
        Ok(())
    }

    pub fn run(&mut self, c: &Circuit) -> Result<()> {
        if c.qubit_count() != self.n {
            return Err(Error::WidthMismatch {
                circuit: c.qubit_count(),
                state: self.n,
            });
        }
        for g in c.gates() {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Probability of each value of `register`, summed in index order.
    pub fn marginal(&self, register: &[QubitId]) -> Vec<f64> {
        let mut probs = vec![0.0; 1 << register.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                probs[read_register(i as u64, register) as usize] += p;
            }
        }
        probs
    }

    /// Register values with nonzero probability.
    pub fn outcomes(&self, register: &[QubitId]) -> Vec<MeasurementOutcome> {
        self.marginal(register)
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
            .map(|(bits, probability)| MeasurementOutcome {
                bits: bits as u64,
                probability,
            })
            .collect()
    }

    /// Samples `shots` readouts of `register` without collapsing the state.
    pub fn measure(&self, register: &[QubitId], seed: u64, shots: usize) -> BTreeMap<u64, usize> {
        let mut cumulative = self.marginal(register);
        let mut acc = 0.0;
        for p in cumulative.iter_mut() {
            acc += *p;
            *p = acc;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.gen::<f64>() * acc;
            let k = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
            *hist.entry(k as u64).or_insert(0) += 1;
        }
        hist
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn init_and_guard() {
        let s = StateVector::new(1, 0).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(
            StateVector::new(27, 0).unwrap_err(),
            Error::TooManyQubits {
                requested: 27,
                limit: 26
            }
        );
        assert!(StateVector::new(2, 4).is_err());
    }

    #[test]
    fn hadamard_probabilities() {
        let mut s = StateVector::new(1, 0).unwrap();
        s.apply(&Gate::H(0)).unwrap();
        let m = s.marginal(&[0]);
        assert!((m[0] - 0.5).abs() < 1e-12 && (m[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mcz_flips_only_all_ones() {
        for basis in 0..8 {
            let mut s = StateVector::new(3, basis).unwrap();
            s.apply(&Gate::mcz([0, 1, 2])).unwrap();
            let expect = if basis == 7 { -1.0 } else { 1.0 };
            assert!(close(s.amplitude(basis), Complex64::new(expect, 0.0)));
        }
    }

    #[test]
    fn controlled_x_permutes_basis() {
        let mut s = StateVector::new(4, 0b1011).unwrap();
        s.apply(&Gate::Mcx {
            controls: vec![0, 1, 3],
            target: 2,
        })
        .unwrap();
        assert_eq!(s.amplitude(0b1111), Complex64::new(1.0, 0.0));
        s.apply(&Gate::Ccx {
            controls: [0, 2],
            target: 1,
        })
        .unwrap();
        assert_eq!(s.amplitude(0b1101), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn run_checks_width() {
        let c = CircuitBuilder::new(&[("q", 3)]).unwrap().finish();
        let mut s = StateVector::new(2, 0).unwrap();
        assert_eq!(s.run(&c).unwrap_err(), Error::WidthMismatch { circuit: 3, state: 2 });
    }

    #[test]
    fn measure_basis_state() {
        let s = StateVector::new(3, 0b110).unwrap();
        let h = s.measure(&[2, 1, 0], 1, 100);
        assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![(0b110, 100)]);
    }
}
