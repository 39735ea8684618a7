use thiserror::Error;

use crate::pq_calculus::MAX_DEGREE;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters p={p}, q={q}: require 0 < q < p <= 1")]
    InvalidParams { p: f64, q: f64 },

    #[error("degree n={0} outside 1..={MAX_DEGREE}")]
    DegreeOutOfRange(usize),

    #[error("x={0} outside [0, 1]")]
    PointOutOfRange(f64),

    #[error("moment order {0} not in {{0, 1, 2}}")]
    UnsupportedMoment(u32),

    #[error("unknown function `{name}`; known functions: {known}")]
    UnknownFunction { name: String, known: String },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown sequence rule `{0}`; known rules: half_harmonic, log_rule, constant(p,q)")]
    UnknownRule(String),

    #[error("sequence `{rule}` leaves the valid regime at n={n} (p={p}, q={q})")]
    InvalidSequence {
        rule: String,
        n: usize,
        p: f64,
        q: f64,
    },

    #[error("variant list is empty")]
    EmptyVariants,
}
