use std::process::ExitCode;

use clap::Parser;
use pq_bernstein_cli::args::Cli;
use pq_bernstein_cli::{execute, Outcome, EXIT_CHECKS_FAILED, EXIT_PLUMBING};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emission = match execute(&cli.command) {
        Ok(e) => e,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(EXIT_PLUMBING);
        }
    };
    if let Err(err) = emission.write() {
        eprintln!("error: {err:#}");
        return ExitCode::from(EXIT_PLUMBING);
    }
    match emission.outcome {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::ChecksFailed => {
            let failed: Vec<&str> = emission
                .table
                .verdicts
                .iter()
                .filter(|(_, v)| *v == pq_bernstein::VerdictValue::Bool(false))
                .map(|(k, _)| k.as_str())
                .collect();
            eprintln!("check failed: {}", failed.join(", "));
            ExitCode::from(EXIT_CHECKS_FAILED)
        }
    }
}
