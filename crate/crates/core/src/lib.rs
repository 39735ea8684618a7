//! (p,q)-analogue of Bernstein operators on `[0, 1]`.
//!
//! - [`pq_calculus`]: (p,q)-integers, factorials, binomials.
//! - [`operator`]: basis, nodes, operator evaluation, closed-form moments.
//! - [`analysis`]: sup-norm errors, the second-moment bound, convergence and
//!   trend experiments, curve sampling.
//! - [`verify`]: the invariant suite behind the `verify` command.
//! - [`report`]: a column-oriented table that experiment results convert into.

pub mod analysis;
pub mod error;
pub mod function;
pub mod operator;
pub mod pq_calculus;
pub mod report;
pub mod sum;
pub mod verify;

pub use analysis::{
    curve_samples, figure_data, korovkin_experiment, second_moment_bound, sup_error,
    trend_experiment, ConvergenceReport, CurveSample, FigureData, Grid, KorovkinRow, ParamSequence,
    TrendReport, TrendVariants,
};
pub use error::{Error, Result};
pub use function::{Builtin, TargetFunction};
pub use operator::{
    apply_operator, apply_operator_original, basis, moment_closed_form, nodes,
    second_moment_identity_check, BasisVector, BernsteinOperator, NodeVector, OperatorSpec,
    Variant,
};
pub use pq_calculus::{
    pq_binomial, pq_binomial_oracle, pq_binomial_row, pq_factorial, pq_integer, PQParams,
    MAX_DEGREE,
};
pub use report::{Cell, Table, VerdictValue};
pub use verify::{run_verification, VerifyConfig, VerifyReport};
