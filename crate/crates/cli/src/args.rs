use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "pqbern",
    version,
    about = "Experiments with (p,q)-Bernstein operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample f and B(f;x) on a grid
    Eval(EvalArgs),
    /// Operator images of 1, t, t^2 against their closed forms
    Moments(OperatorArgs),
    /// Run the invariant suite over an (n, p, q) lattice
    Verify(VerifyArgs),
    /// Sup errors along a parameter sequence p_n, q_n -> 1
    Converge(ConvergeArgs),
    /// Sup errors while varying q, n, or (p, q)
    Trend(TrendArgs),
    /// Target curve plus one operator curve per variant
    Figure(FigureArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// key=value file supplying defaults for any flag
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Number of uniform grid points in [0, 1] [default: 1001]
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// csv or json [default: csv]
    #[arg(long)]
    pub format: Option<Format>,
    /// Omit the timestamp from the header
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Debug, Args, Default)]
pub struct FunctionArgs {
    /// Built-in target function [default: paper_cubic]
    #[arg(long, conflicts_with = "poly")]
    pub function: Option<String>,
    /// Polynomial target given as monomial coefficients c0,c1,c2,...
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    pub poly: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct OperatorArgs {
    /// Degree, 1..=200
    #[arg(long)]
    pub n: Option<usize>,
    /// p in (0, 1], strictly greater than q
    #[arg(long)]
    pub p: Option<f64>,
    /// q in (0, p)
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Default)]
pub struct EvalArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Add a B_original column from the uncorrected operator
    #[arg(long)]
    pub use_original: bool,
}

#[derive(Debug, Args, Default)]
pub struct VerifyArgs {
    /// Restrict the lattice to these (n, p, q) values
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Check the uncorrected operator
    #[arg(long)]
    pub use_original: bool,
    /// Pass only if the uncorrected operator fails to reproduce constants
    #[arg(long)]
    pub expect_defect: bool,
}

#[derive(Debug, Args, Default)]
pub struct ConvergeArgs {
    /// half_harmonic, log_rule or constant(p,q) [default: half_harmonic]
    #[arg(long)]
    pub rule: Option<String>,
    /// Explicit degree list, e.g. 10,50,100,200
    #[arg(long, value_name = "LIST", conflicts_with_all = ["n_min", "n_max", "n_step"])]
    pub degrees: Option<String>,
    /// [default: 2]
    #[arg(long)]
    pub n_min: Option<usize>,
    /// [default: 100]
    #[arg(long)]
    pub n_max: Option<usize>,
    /// [default: 1]
    #[arg(long)]
    pub n_step: Option<usize>,
    /// Largest final error_m2 that counts as converged [default: 0.01]
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Default)]
pub struct TrendArgs {
    /// vary_q, vary_n or vary_pq [default: vary_q]
    #[arg(long)]
    pub kind: Option<String>,
    /// Variant values: q list, n list, or p:q pairs
    #[arg(long, value_name = "LIST")]
    pub variants: Option<String>,
    #[command(flatten)]
    pub operator: OperatorArgs,
}

#[derive(Debug, Args, Default)]
pub struct FigureArgs {
    /// vary_q, vary_n or vary_pq
    pub figure: String,
    /// Variant values: q list, n list, or p:q pairs
    #[arg(long, value_name = "LIST")]
    pub variants: Option<String>,
    #[command(flatten)]
    pub operator: OperatorArgs,
}
