//! Command-line front end for the `pq-bernstein` library.
//!
//! Exit status: `0` on success, `1` when a tolerance check fails, `2` for
//! usage, parse, parameter or I/O errors.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use anyhow::Result;

use args::Command;
pub use commands::{Emission, Outcome};

pub const EXIT_CHECKS_FAILED: u8 = 1;
pub const EXIT_PLUMBING: u8 = 2;

/// Runs one command without writing anything.
pub fn execute(command: &Command) -> Result<Emission> {
    match command {
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Moments(a) => commands::cmd_moments(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Converge(a) => commands::cmd_converge(a),
        Command::Trend(a) => commands::cmd_trend(a),
        Command::Figure(a) => commands::cmd_figure(a),
    }
}
