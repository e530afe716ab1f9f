use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Sign {
    pub fn to_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A computational basis state with a ±1 phase, on at most 64 qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhasedBasisState {
    pub n: usize,
    pub bits: u64,
    pub phase: Sign,
}

impl PhasedBasisState {
    pub fn new(n: usize, bits: u64) -> PhasedBasisState {
        PhasedBasisState {
            n,
            bits,
            phase: Sign::Plus,
        }
    }

    pub fn bit(&self, q: usize) -> bool {
        (self.bits >> q) & 1 == 1
    }
}

/// Bits print qubit 0 first, followed by the phase.
impl fmt::Display for PhasedBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        f.write_str(match self.phase {
            Sign::Plus => " +",
            Sign::Minus => " -",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Flip { controls: u64, target: u64 },
    Phase { mask: u64 },
}

/// A Hadamard-free circuit compiled to bitmask operations.
#[derive(Clone, Debug)]
pub struct Emulator {
    n: usize,
    ops: Vec<Op>,
}

fn mask(qubits: &[usize]) -> u64 {
    qubits.iter().fold(0, |m, q| m | (1 << q))
}

impl Emulator {
    pub fn compile(c: &Circuit) -> Result<Emulator> {
        if c.qubit_count() > 64 {
            return Err(Error::TooManyQubits {
                requested: c.qubit_count(),
                limit: 64,
            });
        }
        let ops = c
            .gates()
            .iter()
            .map(|g| match g {
                Gate::H(_) => Err(Error::UnsupportedGate("h")),
                Gate::Z(q) => Ok(Op::Phase { mask: 1 << q }),
                Gate::Mcz(q) => Ok(Op::Phase { mask: mask(q) }),
                _ => Ok(Op::Flip {
                    controls: mask(g.controls()),
                    target: 1 << g.target().expect("x-type gates have a target"),
                }),
            })
            .collect::<Result<_>>()?;
        Ok(Emulator {
            n: c.qubit_count(),
            ops,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn run(&self, mut s: PhasedBasisState) -> PhasedBasisState {
        for op in &self.ops {
            match *op {
                Op::Flip { controls, target } => {
                    if s.bits & controls == controls {
                        s.bits ^= target;
                    }
                }
                Op::Phase { mask } => {
                    if s.bits & mask == mask {
                        s.phase = -s.phase;
                    }
                }
            }
        }
        s
    }
}

pub fn emulate(basis: PhasedBasisState, c: &Circuit) -> Result<PhasedBasisState> {
    if basis.n != c.qubit_count() {
        return Err(Error::WidthMismatch {
            circuit: c.qubit_count(),
            state: basis.n,
        });
    }
    Ok(Emulator::compile(c)?.run(basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    #[test]
    fn x_on_first_qubit_prints_first() {
        let mut b = CircuitBuilder::new(&[("q", 3)]).unwrap();
        b.x(0).unwrap();
        let out = emulate(PhasedBasisState::new(3, 0), &b.finish()).unwrap();
        assert_eq!(out.to_string(), "100 +");
    }

    #[test]
    fn mcz_on_all_ones() {
        let mut b = CircuitBuilder::new(&[("q", 4)]).unwrap();
        b.mcz(&[0, 1, 2, 3]).unwrap();
        let out = emulate(PhasedBasisState::new(4, 0b1111), &b.finish()).unwrap();
        assert_eq!(out.bits, 0b1111);
        assert_eq!(out.phase, Sign::Minus);
    }

    #[test]
    fn hadamard_is_rejected() {
        let mut b = CircuitBuilder::new(&[("q", 1)]).unwrap();
        b.h(0).unwrap();
        assert_eq!(Emulator::compile(&b.finish()).unwrap_err(), Error::UnsupportedGate("h"));
    }
}
