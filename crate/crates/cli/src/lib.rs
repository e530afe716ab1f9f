//! Command-line front end: cipher utilities, oracle export, exhaustive
//! verification, attack simulation and benchmarks.

mod bench;
mod report;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use saes_grover::grover::{self, AttackOptions};
use saes_grover::oracle::{build_oracle, verify_circuit, verify_oracle, VerifyReport};
use saes_grover::qsim::DEFAULT_QUBIT_LIMIT;
use saes_grover::saes::{decrypt_with, encrypt_with};
use saes_grover::{AttackInstance, Block, Circuit, Key, LeakConfig, OracleVariant, RoundConstants};

pub use report::SCHEMA_VERSION;

/// Attacks wider than this need `--allow-long`.
pub const ATTACK_QUBIT_GUARD: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] saes_grover::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Core(saes_grover::Error::NoSolutions) => 1,
            CliError::Usage(_) | CliError::Core(_) | CliError::Io { .. } => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "saes-grover", version, about = "Grover key search on S-AES")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt one block.
    Encrypt(CipherArgs),
    /// Decrypt one block.
    Decrypt(CipherArgs),
    /// Build an oracle and print its circuit or statistics.
    BuildOracle {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Emit::Stats)]
        emit: Emit,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Emulate an oracle on every searched key and compare with brute force.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Verify this exported circuit instead of a freshly built one.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// Simulate the full Grover attack on a state vector.
    Attack {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1024)]
        shots: usize,
        /// Permit attacks wider than the default guard.
        #[arg(long)]
        allow_long: bool,
        /// Dense state vector ceiling once `--allow-long` is given.
        #[arg(long, default_value_t = DEFAULT_QUBIT_LIMIT)]
        max_qubits: usize,
    },
    /// Time simulator kernels, oracle emulation or attack iterations.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Smallest and largest state for the gate suite.
        #[arg(long, default_value_t = 20)]
        min_qubits: usize,
        #[arg(long, default_value_t = 24)]
        max_qubits: usize,
    },
}

#[derive(Debug, Args)]
pub struct CipherArgs {
    #[arg(long)]
    pub key: Key,
    #[arg(long)]
    pub text: Block,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub variant: OracleVariant,
    /// Leaked nibbles as `B0^0=7,B1^1=A`, or `none`.
    #[arg(long, default_value = "none")]
    pub leak: LeakConfig,
    #[arg(long)]
    pub plaintext: Block,
    #[arg(long, required_unless_present = "key", conflicts_with = "key")]
    pub ciphertext: Option<Block>,
    /// Derive the ciphertext by encrypting the plaintext under this key.
    #[arg(long)]
    pub key: Option<Key>,
}

impl InstanceArgs {
    pub fn instance(&self) -> AttackInstance {
        let c = self
            .ciphertext
            .or_else(|| self.key.map(|k| encrypt_with(self.plaintext, k, RC)))
            .expect("clap requires one of --ciphertext and --key");
        AttackInstance::new(self.variant, self.plaintext, c, self.leak.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Stats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Gates,
    Oracle,
    Attack,
}

const RC: RoundConstants = RoundConstants::STANDARD;

/// Text for stdout plus the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, exit_code: 0 }
    }
}

fn render<T: serde::Serialize>(format: Format, value: &T, human: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Human => human(),
    }
}

fn read_circuit(path: &PathBuf) -> Result<Circuit, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(Circuit::from_text(&text)?)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Encrypt(a) | Command::Decrypt(a) => {
            let encrypting = matches!(cli.command, Command::Encrypt(_));
            let output = if encrypting {
                encrypt_with(a.text, a.key, RC)
            } else {
                decrypt_with(a.text, a.key, RC)
            };
            let r = report::Cipher::new(encrypting, a.key, a.text, output);
            Ok(Outcome::ok(render(format, &r, || format!("{output}\n"))))
        }
        Command::BuildOracle { instance, emit, output } => {
            let inst = instance.instance();
            let (circuit, layout) = build_oracle(&inst, RC)?;
            let text = match emit {
                Emit::Text => circuit.to_text(),
                Emit::Stats => {
                    let r = report::BuildOracle::new(&inst, &circuit, &layout);
                    render(format, &r, || r.human())
                }
            };
            match output {
                Some(path) => {
                    fs::write(path, &text).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
        Command::Verify { instance, circuit } => {
            let inst = instance.instance();
            if inst.leak.search_bits() > 16 {
                return Err(CliError::Usage("search space exceeds 2^16 keys".into()));
            }
            let vr: VerifyReport = match circuit {
                Some(path) => {
                    let c = read_circuit(path)?;
                    inst.variant.check_leak(&inst.leak)?;
                    let key = c.register("key").map(<[_]>::to_vec).unwrap_or_default();
                    if key.len() != inst.leak.search_bits() {
                        return Err(CliError::Usage(format!(
                            "circuit key register has {} qubits but the leak leaves {} searched bits",
                            key.len(),
                            inst.leak.search_bits()
                        )));
                    }
                    verify_circuit(&c, &key, &inst, RC)?
                }
                None => verify_oracle(&inst, RC)?,
            };
            let r = report::Verify::new(&inst, &vr);
            Ok(Outcome {
                stdout: render(format, &r, || r.human()),
                exit_code: if vr.passed() { 0 } else { 1 },
            })
        }
        Command::Attack {
            instance,
            shots,
            allow_long,
            max_qubits,
        } => {
            let inst = instance.instance();
            let (_, layout) = build_oracle(&inst, RC)?;
            if layout.total_qubits > ATTACK_QUBIT_GUARD && !allow_long {
                return Err(CliError::Usage(format!(
                    "this attack needs {} qubits, above the {ATTACK_QUBIT_GUARD}-qubit guard; \
                     leak more nibbles or pass --allow-long (the 23-qubit run takes hours)",
                    layout.total_qubits
                )));
            }
            let opts = AttackOptions {
                shots: *shots,
                seed: cli.seed,
                qubit_limit: *max_qubits,
            };
            let result = grover::run_attack(&inst, RC, opts)?;
            let r = report::Attack::new(&inst, &result, opts);
            Ok(Outcome {
                stdout: render(format, &r, || r.human()),
                exit_code: if result.verified { 0 } else { 1 },
            })
        }
        Command::Bench {
            suite,
            min_qubits,
            max_qubits,
        } => {
            if min_qubits > max_qubits || *max_qubits > DEFAULT_QUBIT_LIMIT {
                return Err(CliError::Usage(format!(
                    "need min-qubits <= max-qubits <= {DEFAULT_QUBIT_LIMIT}"
                )));
            }
            let r = match suite {
                Suite::Gates => bench::gates(*min_qubits..=*max_qubits, cli.seed)?,
                Suite::Oracle => bench::oracle()?,
                Suite::Attack => bench::attack(cli.seed)?,
            };
            Ok(Outcome::ok(render(format, &r, || r.human())))
        }
    }
}
