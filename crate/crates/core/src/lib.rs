//! Grover key-search workbench for Simplified AES.
//!
//! The crate is layered bottom-up: [`saes`] is the classical cipher, [`circuit`]
//! the gate-level IR, [`qsim`] the simulators, [`blocks`] the quantum cipher
//! primitives, [`oracle`] the four oracle constructions and [`grover`] the
//! attack driver.

pub mod blocks;
pub mod circuit;
pub mod error;
pub mod gf2;
pub mod grover;
pub mod oracle;
pub mod qsim;
pub mod saes;

pub use circuit::{Circuit, CircuitBuilder, CircuitStats, Gate, GateKind, QubitId};
pub use error::{Error, Result};
pub use grover::{AttackResult, GroverPlan};
pub use oracle::{AttackInstance, OracleLayout, OracleVariant};
pub use saes::{Block, Byte, Key, KeyNibble, LeakConfig, Nibble, RoundConstants, RoundKeys};
