//! Simulation backends.
//!
//! Qubit `q` is bit `q` of a basis index in every backend. Register values
//! read the register's first qubit as the most significant bit.

mod agreement;
mod emulator;
mod sparse;
mod statevector;

pub use agreement::{check_agreement, AgreementReport, Backend};
pub use emulator::{emulate, Emulator, PhasedBasisState, Sign};
pub use sparse::SparseState;
pub use statevector::{MeasurementOutcome, StateVector, DEFAULT_QUBIT_LIMIT};

use crate::circuit::QubitId;

pub fn read_register(bits: u64, register: &[QubitId]) -> u64 {
    register.iter().fold(0, |acc, &q| (acc << 1) | ((bits >> q) & 1))
}

pub fn write_register(bits: u64, register: &[QubitId], value: u64) -> u64 {
    let n = register.len();
    register.iter().enumerate().fold(bits, |acc, (i, &q)| {
        let bit = (value >> (n - 1 - i)) & 1;
        (acc & !(1 << q)) | (bit << q)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_round_trip() {
        let reg = [5, 0, 3];
        let bits = write_register(0, &reg, 0b101);
        assert_eq!(bits, (1 << 5) | (1 << 3));
        assert_eq!(read_register(bits, &reg), 0b101);
        assert_eq!(write_register(bits, &reg, 0), 0);
    }
}
