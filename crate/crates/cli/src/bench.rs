//! Wall-clock measurements. Numbers depend on the machine; only the shape
//! of the output is stable.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saes_grover::grover::iteration_circuit;
use saes_grover::oracle::verify_oracle;
use saes_grover::qsim::StateVector;
use saes_grover::{AttackInstance, Block, Gate, Key, KeyNibble, OracleVariant};
use serde::Serialize;

use crate::report::{Bench, SCHEMA_VERSION};
use crate::{CliError, RC};

#[derive(Serialize)]
struct GateRow {
    qubits: usize,
    amplitudes: u64,
    gate: &'static str,
    repetitions: usize,
    ns_per_amplitude: f64,
}

#[derive(Serialize)]
struct OracleRow {
    variant: OracleVariant,
    leak: String,
    qubits: usize,
    keys: usize,
    seconds: f64,
    keys_per_second: f64,
    passed: bool,
}

#[derive(Serialize)]
struct AttackRow {
    variant: OracleVariant,
    leak: String,
    qubits: usize,
    iterations: usize,
    seconds: f64,
    iterations_per_second: f64,
}

fn bench(suite: &'static str, rows: Vec<impl Serialize>) -> Bench {
    Bench {
        schema_version: SCHEMA_VERSION,
        command: "bench",
        suite,
        results: rows
            .into_iter()
            .map(|r| serde_json::to_value(r).expect("rows serialize"))
            .collect(),
    }
}

pub fn gates(sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Result<Bench, CliError> {
    const REPS: usize = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for n in sizes {
        let mut state = StateVector::new(n, rng.gen_range(0..1u64 << n))?;
        let mut q = || rng.gen_range(0..n);
        let (a, b, c, d, e) = (q(), q(), q(), q(), q());
        let distinct = |v: &[usize]| {
            let mut s = v.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len() == v.len()
        };
        // Fall back to fixed operands when the draw collides.
        let (a, b, c, d, e) = if distinct(&[a, b, c, d, e]) {
            (a, b, c, d, e)
        } else {
            (0, 1, 2, 3, 4)
        };
        let cases: [(&'static str, Gate); 6] = [
            ("x", Gate::X(a)),
            ("h", Gate::H(a)),
            ("cx", Gate::Cx { control: a, target: b }),
            (
                "ccx",
                Gate::Ccx {
                    controls: [a, b],
                    target: c,
                },
            ),
            (
                "mcx",
                Gate::Mcx {
                    controls: vec![a, b, c, d],
                    target: e,
                },
            ),
            ("mcz", Gate::mcz([a, b, c, d, e])),
        ];
        for (name, gate) in cases {
            let start = Instant::now();
            for _ in 0..REPS {
                state.apply(&gate)?;
            }
            let ns = start.elapsed().as_nanos() as f64;
            rows.push(GateRow {
                qubits: n,
                amplitudes: 1 << n,
                gate: name,
                repetitions: REPS,
                ns_per_amplitude: ns / (REPS as f64 * (1u64 << n) as f64),
            });
        }
    }
    Ok(bench("gates", rows))
}

fn regression(variant: OracleVariant, leaked: &[KeyNibble]) -> AttackInstance {
    AttackInstance::from_key(variant, Block::from_u16(0x6F6B), Key::from_u16(0xA73B), leaked)
}

pub fn oracle() -> Result<Bench, CliError> {
    use KeyNibble::*;
    let cases: [(OracleVariant, &[KeyNibble]); 4] = [
        (OracleVariant::FullBasic, &[]),
        (OracleVariant::DoubleSplit, &[]),
        (OracleVariant::B1LeakExact, &[B1Hi, B1Lo]),
        (OracleVariant::Split, &[B0Hi, B0Lo]),
    ];
    let mut rows = Vec::new();
    for (variant, leaked) in cases {
        let inst = regression(variant, leaked);
        let start = Instant::now();
        let report = verify_oracle(&inst, RC)?;
        let seconds = start.elapsed().as_secs_f64();
        let (circuit, _) = saes_grover::oracle::build_oracle(&inst, RC)?;
        rows.push(OracleRow {
            variant,
            leak: inst.leak.to_string(),
            qubits: circuit.qubit_count(),
            keys: report.keys_checked,
            seconds,
            keys_per_second: report.keys_checked as f64 / seconds,
            passed: report.passed(),
        });
    }
    Ok(bench("oracle", rows))
}

pub fn attack(seed: u64) -> Result<Bench, CliError> {
    use KeyNibble::*;
    let cases: [(OracleVariant, &[KeyNibble], usize); 3] = [
        (OracleVariant::DoubleSplit, &[B0Hi, B0Lo, B1Hi], 3),
        (OracleVariant::DoubleSplit, &[B0Hi, B1Lo], 12),
        (OracleVariant::Split, &[B1Hi, B1Lo], 12),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for (variant, leaked, iterations) in cases {
        let inst = regression(variant, leaked);
        let (circuit, layout) = iteration_circuit(&inst, RC)?;
        let basis = rng.gen_range(0..1u64 << layout.key_register.len());
        let mut state = StateVector::new(layout.total_qubits, 0)?;
        for (i, &q) in layout.key_register.iter().enumerate() {
            if basis >> i & 1 == 1 {
                state.apply(&Gate::X(q))?;
            }
            state.apply(&Gate::H(q))?;
        }
        let start = Instant::now();
        for _ in 0..iterations {
            state.run(&circuit)?;
        }
        let seconds = start.elapsed().as_secs_f64();
        rows.push(AttackRow {
            variant,
            leak: inst.leak.to_string(),
            qubits: layout.total_qubits,
            iterations,
            seconds,
            iterations_per_second: iterations as f64 / seconds,
        });
    }
    Ok(bench("attack", rows))
}
