use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use saes_grover_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.stdout.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
