//! JSON shapes printed by the CLI. `docs/output.schema.json` describes them.

use std::fmt::Write;

use saes_grover::grover::{AttackOptions, AttackResult, GroverPlan};
use saes_grover::oracle::{Mismatch, OracleLayout, VerifyReport};
use saes_grover::{AttackInstance, Block, Circuit, CircuitStats, Key, LeakConfig, OracleVariant};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Cipher {
    schema_version: u32,
    command: &'static str,
    key: Key,
    input: Block,
    output: Block,
}

impl Cipher {
    pub fn new(encrypting: bool, key: Key, input: Block, output: Block) -> Cipher {
        Cipher {
            schema_version: SCHEMA_VERSION,
            command: if encrypting { "encrypt" } else { "decrypt" },
            key,
            input,
            output,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Instance {
    variant: OracleVariant,
    leak: LeakConfig,
    plaintext: Block,
    ciphertext: Block,
}

impl From<&AttackInstance> for Instance {
    fn from(i: &AttackInstance) -> Instance {
        Instance {
            variant: i.variant,
            leak: i.leak.clone(),
            plaintext: i.plaintext,
            ciphertext: i.ciphertext,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BuildOracle {
    schema_version: u32,
    command: &'static str,
    instance: Instance,
    qubit_count: usize,
    key_qubits: usize,
    text_qubits: usize,
    ancilla_qubits: usize,
    stats: CircuitStats,
}

impl BuildOracle {
    pub fn new(inst: &AttackInstance, c: &Circuit, layout: &OracleLayout) -> BuildOracle {
        BuildOracle {
            schema_version: SCHEMA_VERSION,
            command: "build-oracle",
            instance: inst.into(),
            qubit_count: c.qubit_count(),
            key_qubits: layout.key_register.len(),
            text_qubits: layout.text_register.len(),
            ancilla_qubits: layout.ancillas.len(),
            stats: c.stats(),
        }
    }

    pub fn human(&self) -> String {
        let mut s = format!(
            "{} oracle, leak {}: {} qubits ({} key + {} text + {} ancilla)\n",
            self.instance.variant,
            self.instance.leak,
            self.qubit_count,
            self.key_qubits,
            self.text_qubits,
            self.ancilla_qubits
        );
        let _ = writeln!(s, "gates {} depth {}", self.stats.total_gates, self.stats.depth);
        for (kind, n) in &self.stats.gate_count_by_kind {
            let _ = writeln!(s, "  {kind:<4} {n}");
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct Verify {
    schema_version: u32,
    command: &'static str,
    instance: Instance,
    keys_checked: usize,
    solutions: Vec<Key>,
    flips: Vec<Key>,
    mismatches: Vec<Mismatch>,
    registers_restored: bool,
    passed: bool,
}

impl Verify {
    pub fn new(inst: &AttackInstance, r: &VerifyReport) -> Verify {
        Verify {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            instance: inst.into(),
            keys_checked: r.keys_checked,
            solutions: r.solutions.clone(),
            flips: r.flips.clone(),
            mismatches: r.mismatches.clone(),
            registers_restored: r.registers_restored,
            passed: r.passed(),
        }
    }

    pub fn human(&self) -> String {
        let keys = |ks: &[Key]| ks.iter().map(Key::to_string).collect::<Vec<_>>().join(" ");
        let mut s = format!(
            "{}: {} keys checked, {} flipped [{}], {} solutions [{}]\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.keys_checked,
            self.flips.len(),
            keys(&self.flips),
            self.solutions.len(),
            keys(&self.solutions)
        );
        let _ = writeln!(s, "registers restored: {}", self.registers_restored);
        for m in self.mismatches.iter().take(10) {
            let _ = writeln!(
                s,
                "  key {}: expected flip {}, observed {}, restored {}",
                m.key, m.expected_flip, m.observed_flip, m.restored
            );
        }
        if self.mismatches.len() > 10 {
            let _ = writeln!(s, "  ... {} more", self.mismatches.len() - 10);
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    key: Key,
    count: usize,
}

#[derive(Debug, Serialize)]
pub struct Attack {
    schema_version: u32,
    command: &'static str,
    instance: Instance,
    total_qubits: usize,
    plan: GroverPlan,
    shots: usize,
    seed: u64,
    best_key: Key,
    verified: bool,
    empirical_success: f64,
    distinct_outcomes: usize,
    top_outcomes: Vec<Outcome>,
}

impl Attack {
    pub fn new(inst: &AttackInstance, r: &AttackResult, opts: AttackOptions) -> Attack {
        let mut top: Vec<(&u64, &usize)> = r.histogram.iter().collect();
        top.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        Attack {
            schema_version: SCHEMA_VERSION,
            command: "attack",
            instance: inst.into(),
            total_qubits: r.total_qubits,
            plan: r.plan.clone(),
            shots: opts.shots,
            seed: opts.seed,
            best_key: r.best_key,
            verified: r.verified,
            empirical_success: r.empirical_success,
            distinct_outcomes: r.histogram.len(),
            top_outcomes: top
                .into_iter()
                .take(8)
                .map(|(&kappa, &count)| Outcome {
                    key: inst.leak.merge(kappa as u32),
                    count,
                })
                .collect(),
        }
    }

    pub fn human(&self) -> String {
        let mut s = format!(
            "{} qubits, N={} M={}, {} iterations, predicted success {:.6}\n",
            self.total_qubits, self.plan.n, self.plan.m, self.plan.iterations, self.plan.predicted_success
        );
        let _ = writeln!(
            s,
            "best key {} ({}), empirical success {:.4} over {} shots",
            self.best_key,
            if self.verified { "verified" } else { "wrong" },
            self.empirical_success,
            self.shots
        );
        for o in &self.top_outcomes {
            let _ = writeln!(s, "  {} x{}", o.key, o.count);
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct Bench {
    pub schema_version: u32,
    pub command: &'static str,
    pub suite: &'static str,
    pub results: Vec<serde_json::Value>,
}

impl Bench {
    pub fn human(&self) -> String {
        let mut s = format!("bench {}\n", self.suite);
        for row in &self.results {
            let cells: Vec<String> = row
                .as_object()
                .into_iter()
                .flatten()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(s, "  {}", cells.join(" "));
        }
        s
    }
}
