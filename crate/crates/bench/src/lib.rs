//! Benchmark fixtures shared by the criterion targets.

use pq_bernstein::{OperatorSpec, TargetFunction};

/// Degrees swept by the scaling benchmarks.
pub const DEGREES: [usize; 4] = [10, 50, 100, 200];

pub fn spec(n: usize) -> OperatorSpec {
    OperatorSpec::from_parts(n, 0.98, 0.95).expect("valid benchmark parameters")
}

pub fn paper_cubic() -> TargetFunction {
    TargetFunction::from_name("paper_cubic").expect("registered")
}
