use thiserror::Error;

use crate::oracle::OracleVariant;
use crate::saes::LeakConfig;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),

    #[error("register `{0}` has zero width")]
    ZeroWidth(String),

    #[error("qubit {qubit} is out of range for a {count}-qubit circuit")]
    QubitOutOfRange { qubit: usize, count: usize },

    #[error("gate operands overlap on qubit {0}")]
    OperandOverlap(usize),

    #[error("{kind} gate needs {expected} control(s), got {got}")]
    BadArity {
        kind: &'static str,
        expected: &'static str,
        got: usize,
    },

    #[error("relabeling is not a bijection on the qubit set")]
    NotBijective,

    #[error("wire lists differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("{requested} qubits exceeds the simulator limit of {limit}")]
    TooManyQubits { requested: usize, limit: usize },

    #[error("circuit acts on {circuit} qubits but the state has {state}")]
    WidthMismatch { circuit: usize, state: usize },

    #[error("`{0}` gates are not supported by the reversible emulator")]
    UnsupportedGate(&'static str),

    #[error("variant {variant} cannot be built for leak `{leak}`: {reason}")]
    IncompatibleLeak {
        variant: OracleVariant,
        leak: LeakConfig,
        reason: &'static str,
    },

    #[error("no key maps the plaintext to the ciphertext under this leak")]
    NoSolutions,

    #[error("cannot place nibble expression in a key register: {0}")]
    Unhostable(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
