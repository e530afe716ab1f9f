use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Exact state stored as its nonzero amplitudes, for circuits too wide for a
/// dense vector but acting on few basis states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseState {
    n: usize,
    amps: BTreeMap<u64, Complex64>,
}

impl SparseState {
    pub fn new(n: usize, amps: impl IntoIterator<Item = (u64, Complex64)>) -> Result<SparseState> {
        if n > 64 {
            return Err(Error::TooManyQubits {
                requested: n,
                limit: 64,
            });
        }
        let mut s = SparseState {
            n,
            amps: BTreeMap::new(),
        };
        for (bits, a) in amps {
            if n < 64 && bits >> n != 0 {
                return Err(Error::QubitOutOfRange {
                    qubit: 63 - bits.leading_zeros() as usize,
                    count: n,
                });
            }
            *s.amps.entry(bits).or_default() += a;
        }
        s.amps.retain(|_, a| a.norm_sqr() != 0.0);
        Ok(s)
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &BTreeMap<u64, Complex64> {
        &self.amps
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        let mask = |qs: &[usize]| qs.iter().fold(0u64, |m, q| m | (1 << q));
        match gate {
            Gate::Z(_) | Gate::Mcz(_) => {
                let m = mask(gate.controls()) | gate.target().map_or(0, |t| 1 << t);
                for (bits, a) in self.amps.iter_mut() {
                    if bits & m == m {
                        *a = -*a;
                    }
                }
            }
            Gate::H(t) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let mut next: BTreeMap<u64, Complex64> = BTreeMap::new();
                for (&bits, &a) in &self.amps {
                    let lo = bits & !(1 << t);
                    let sign = if bits & (1 << t) != 0 { -1.0 } else { 1.0 };
                    *next.entry(lo).or_default() += a * s;
                    *next.entry(lo | (1 << t)).or_default() += a * s * sign;
                }
                next.retain(|_, a| a.norm_sqr() != 0.0);
                self.amps = next;
            }
            _ => {
                let c = mask(gate.controls());
                let t = 1u64 << gate.target().expect("x-type gates have a target");
                self.amps = std::mem::take(&mut self.amps)
                    .into_iter()
                    .map(|(bits, a)| if bits & c == c { (bits ^ t, a) } else { (bits, a) })
                    .collect();
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
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_pair_cancels() {
        let mut s = SparseState::new(40, [(1u64 << 39, Complex64::new(1.0, 0.0))]).unwrap();
        s.apply(&Gate::H(39)).unwrap();
        assert_eq!(s.amplitudes().len(), 2);
        s.apply(&Gate::H(39)).unwrap();
        assert_eq!(s.amplitudes().len(), 1);
        assert!((s.amplitudes()[&(1u64 << 39)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn flips_move_amplitudes() {
        let mut s = SparseState::new(33, [(0b11, Complex64::new(0.5, 0.0))]).unwrap();
        s.apply(&Gate::Ccx {
            controls: [0, 1],
            target: 32,
        })
        .unwrap();
        assert!(s.amplitudes().contains_key(&((1 << 32) | 0b11)));
    }
}
