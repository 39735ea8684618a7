//! Sup-norm error estimation and the convergence experiments built on it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::TargetFunction;
use crate::operator::{BernsteinOperator, OperatorSpec};
use crate::pq_calculus::{q_integer, PQParams};
use crate::report::{Cell, Table};

/// Slack allowed on exact identities and on monotone-trend verdicts.
pub const IDENTITY_SLACK: f64 = 1e-12;

/// Default threshold on the final `t^2` error for a "converged" verdict.
pub const DEFAULT_CONVERGENCE_THRESHOLD: f64 = 0.01;

/// Sorted sample points in `[0, 1]`, containing both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub const DEFAULT_RESOLUTION: usize = 1001;

    /// `resolution` equally spaced points, `0` and `1` included exactly.
    pub fn uniform(resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidGrid(format!(
                "resolution {resolution} is below 2"
            )));
        }
        let last = (resolution - 1) as f64;
        let points = (0..resolution).map(|i| i as f64 / last).collect();
        Ok(Self { points })
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.first() != Some(&0.0) || points.last() != Some(&1.0) {
            return Err(Error::InvalidGrid("must start at 0 and end at 1".into()));
        }
        if points
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::InvalidGrid(
                "points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn resolution(&self) -> usize {
        self.points.len()
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self::uniform(Self::DEFAULT_RESOLUTION).expect("default resolution is valid")
    }
}

/// A rule producing `(p_n, q_n)` for each degree `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSequence {
    /// `p_n = 1 - 1/(2n)`, `q_n = 1 - 1/n`; valid from `n = 2`.
    HalfHarmonic,
    /// `p_n = 1 - 1/(n ln(n+2))`, `q_n = 1 - 2/(n ln(n+2))`; valid from `n = 2`.
    LogRule,
    /// Fixed parameters. Both stay below 1 unless `p = 1`, so the operators
    /// need not converge.
    Constant(PQParams),
}

impl ParamSequence {
    pub fn name(&self) -> String {
        match self {
            ParamSequence::HalfHarmonic => "half_harmonic".into(),
            ParamSequence::LogRule => "log_rule".into(),
            ParamSequence::Constant(pq) => format!("constant({},{})", pq.p(), pq.q()),
        }
    }

    pub fn description(&self) -> String {
        match self {
            ParamSequence::HalfHarmonic => "p_n=1-1/(2n);q_n=1-1/n".into(),
            ParamSequence::LogRule => "p_n=1-1/(n*ln(n+2));q_n=1-2/(n*ln(n+2))".into(),
            ParamSequence::Constant(pq) => format!("p_n={};q_n={}", pq.p(), pq.q()),
        }
    }

    pub fn params_at(&self, n: usize) -> Result<PQParams> {
        let nf = n as f64;
        let (p, q) = match self {
            ParamSequence::HalfHarmonic => (1.0 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf),
            ParamSequence::LogRule => {
                let s = nf * (nf + 2.0).ln();
                (1.0 - 1.0 / s, 1.0 - 2.0 / s)
            }
            ParamSequence::Constant(pq) => return Ok(*pq),
        };
        PQParams::new(p, q).map_err(|_| Error::InvalidSequence {
            rule: self.name(),
            n,
            p,
            q,
        })
    }

    pub fn spec_at(&self, n: usize) -> Result<OperatorSpec> {
        OperatorSpec::new(n, self.params_at(n)?)
    }
}

impl fmt::Display for ParamSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ParamSequence {
    type Err = Error;

    /// Accepts `half_harmonic`, `log_rule` and `constant(p,q)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "half_harmonic" => return Ok(ParamSequence::HalfHarmonic),
            "log_rule" => return Ok(ParamSequence::LogRule),
            _ => {}
        }
        let inner = s
            .strip_prefix("constant(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::UnknownRule(s.to_string()))?;
        let (p, q) = inner
            .split_once(',')
            .ok_or_else(|| Error::UnknownRule(s.to_string()))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::UnknownRule(s.to_string()))
        };
        Ok(ParamSequence::Constant(PQParams::new(
            parse(p)?,
            parse(q)?,
        )?))
    }
}

/// `max_x |B(f;x) - f(x)|` over the grid.
pub fn sup_error(spec: &OperatorSpec, f: &TargetFunction, grid: &Grid) -> Result<f64> {
    Ok(sup_error_with(&BernsteinOperator::new(*spec), f, grid))
}

fn sup_error_with(op: &BernsteinOperator, f: &TargetFunction, grid: &Grid) -> f64 {
    let samples = op.sample(f);
    // max is exact, so the parallel reduction is order independent
    grid.points
        .par_iter()
        .map(|&x| (op.eval_samples(&samples, x) - f.eval(x)).abs())
        .reduce(|| 0.0, f64::max)
}

/// `2 p^(n-1) / [n]`, an upper bound on the sup error for `t^2`.
pub fn second_moment_bound(spec: &OperatorSpec) -> f64 {
    // p^(n-1)/[n]_{p,q} = 1/[n]_{q/p}
    2.0 / q_integer(spec.n(), spec.params().ratio())
}

/// One degree of a Korovkin experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct KorovkinRow {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    /// Sup errors for `1`, `t`, `t^2`.
    pub moment_errors: [f64; 3],
    pub bound: f64,
    /// Sup error for the optional extra target function.
    pub function_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceVerdicts {
    /// Every `1` and `t` error is within [`IDENTITY_SLACK`].
    pub low_moments_exact: bool,
    /// Every `t^2` error is at most its bound (plus slack).
    pub within_bound: bool,
    /// The `t^2` errors strictly decrease along the rows.
    pub strictly_decreasing: bool,
    /// The last `t^2` error is at most the threshold.
    pub converged: bool,
}

/// Result of [`korovkin_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rule: ParamSequence,
    pub grid_resolution: usize,
    pub function: Option<String>,
    pub threshold: f64,
    pub rows: Vec<KorovkinRow>,
    pub verdicts: ConvergenceVerdicts,
}

impl ConvergenceReport {
    pub fn m2_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.moment_errors[2]).collect()
    }

    pub fn to_table(&self) -> Table {
        let mut columns = vec![
            "n", "p_n", "q_n", "error_m0", "error_m1", "error_m2", "bound",
        ];
        if self.function.is_some() {
            columns.push("error_f");
        }
        let mut table = Table::new(columns);
        table
            .param("experiment", "converge")
            .param("rule", self.rule.name())
            .param("rule_definition", self.rule.description())
            .param("grid", self.grid_resolution)
            .param("threshold", self.threshold);
        if let Some(f) = &self.function {
            table.param("function", f);
        }
        for row in &self.rows {
            let mut cells = vec![
                Cell::from(row.n),
                Cell::from(row.p),
                Cell::from(row.q),
                Cell::from(row.moment_errors[0]),
                Cell::from(row.moment_errors[1]),
                Cell::from(row.moment_errors[2]),
                Cell::from(row.bound),
            ];
            if let Some(e) = row.function_error {
                cells.push(Cell::from(e));
            }
            table.push_row(cells);
        }
        let v = &self.verdicts;
        table
            .verdict("low_moments_exact", v.low_moments_exact)
            .verdict("error_m2_within_bound", v.within_bound)
            .verdict("error_m2_strictly_decreasing", v.strictly_decreasing)
            .verdict(
                "convergence",
                if v.converged {
                    "converged"
                } else {
                    "no-convergence"
                },
            );
        table
    }
}

/// Korovkin-style experiment: for each degree, the sup errors on `1`, `t`,
/// `t^2` (and optionally `f`) together with the `t^2` bound.
///
/// Degrees are processed in parallel; rows come back in input order.
pub fn korovkin_experiment(
    rule: ParamSequence,
    degrees: &[usize],
    grid: &Grid,
    f: Option<&TargetFunction>,
    threshold: f64,
) -> Result<ConvergenceReport> {
    if degrees.is_empty() {
        return Err(Error::EmptyVariants);
    }
    let specs = degrees
        .iter()
        .map(|&n| rule.spec_at(n))
        .collect::<Result<Vec<_>>>()?;
    let monomials = [0u8, 1, 2].map(|m| TargetFunction::monomial(m).expect("registered"));
    let rows: Vec<KorovkinRow> = specs
        .par_iter()
        .map(|spec| {
            let op = BernsteinOperator::new(*spec);
            KorovkinRow {
                n: spec.n(),
                p: spec.p(),
                q: spec.q(),
                moment_errors: monomials.each_ref().map(|m| sup_error_with(&op, m, grid)),
                bound: second_moment_bound(spec),
                function_error: f.map(|f| sup_error_with(&op, f, grid)),
            }
        })
        .collect();
    let m2: Vec<f64> = rows.iter().map(|r| r.moment_errors[2]).collect();
    let verdicts = ConvergenceVerdicts {
        low_moments_exact: rows
            .iter()
            .all(|r| r.moment_errors[0] <= IDENTITY_SLACK && r.moment_errors[1] <= IDENTITY_SLACK),
        within_bound: rows
            .iter()
            .all(|r| r.moment_errors[2] <= r.bound + IDENTITY_SLACK),
        strictly_decreasing: m2.windows(2).all(|w| w[1] < w[0]),
        converged: m2.last().is_some_and(|&e| e <= threshold),
    };
    Ok(ConvergenceReport {
        rule,
        grid_resolution: grid.resolution(),
        function: f.map(|f| f.name().to_string()),
        threshold,
        rows,
        verdicts,
    })
}

/// The direction a trend experiment moves in, with its values.
#[derive(Debug, Clone, PartialEq)]
pub enum TrendVariants {
    /// `q` values at the base `n`, `p`.
    Q(Vec<f64>),
    /// Degrees at the base `p`, `q`.
    N(Vec<usize>),
    /// `(p, q)` pairs at the base `n`.
    PQ(Vec<(f64, f64)>),
}

impl TrendVariants {
    pub fn kind(&self) -> &'static str {
        match self {
            TrendVariants::Q(_) => "vary_q",
            TrendVariants::N(_) => "vary_n",
            TrendVariants::PQ(_) => "vary_pq",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TrendVariants::Q(v) => v.len(),
            TrendVariants::N(v) => v.len(),
            TrendVariants::PQ(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Variant specs, sorted along the direction of the trend
    /// (`q` ascending, `n` ascending, or `(p, q)` ascending).
    pub fn specs(&self, base: &OperatorSpec) -> Result<Vec<OperatorSpec>> {
        if self.is_empty() {
            return Err(Error::EmptyVariants);
        }
        let mut specs = match self {
            TrendVariants::Q(qs) => qs
                .iter()
                .map(|&q| OperatorSpec::from_parts(base.n(), base.p(), q))
                .collect::<Result<Vec<_>>>()?,
            TrendVariants::N(ns) => ns
                .iter()
                .map(|&n| OperatorSpec::new(n, *base.params()))
                .collect::<Result<Vec<_>>>()?,
            TrendVariants::PQ(pqs) => pqs
                .iter()
                .map(|&(p, q)| OperatorSpec::from_parts(base.n(), p, q))
                .collect::<Result<Vec<_>>>()?,
        };
        match self {
            TrendVariants::Q(_) => specs.sort_by(|a, b| a.q().total_cmp(&b.q())),
            TrendVariants::N(_) => specs.sort_by_key(|s| s.n()),
            TrendVariants::PQ(_) => {
                specs.sort_by(|a, b| a.p().total_cmp(&b.p()).then(a.q().total_cmp(&b.q())))
            }
        }
        Ok(specs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendRow {
    pub spec: OperatorSpec,
    pub sup_error: f64,
}

/// Result of [`trend_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub kind: &'static str,
    pub base: OperatorSpec,
    pub function: String,
    pub grid_resolution: usize,
    pub rows: Vec<TrendRow>,
    /// Errors never grow by more than [`IDENTITY_SLACK`] along the rows.
    pub weakly_decreasing: bool,
}

impl TrendReport {
    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.sup_error).collect()
    }

    pub fn to_table(&self) -> Table {
        let mut table = Table::new(["n", "p", "q", "sup_error"]);
        table
            .param("experiment", self.kind)
            .param("function", &self.function)
            .param("base_n", self.base.n())
            .param("base_p", self.base.p())
            .param("base_q", self.base.q())
            .param("grid", self.grid_resolution);
        for row in &self.rows {
            table.push_row(vec![
                Cell::from(row.spec.n()),
                Cell::from(row.spec.p()),
                Cell::from(row.spec.q()),
                Cell::from(row.sup_error),
            ]);
        }
        table.verdict("weakly_decreasing", self.weakly_decreasing);
        table
    }
}

fn weakly_decreasing(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] <= w[0] + IDENTITY_SLACK)
}

/// Sup error of `f` for each variant of `base`, in trend order.
pub fn trend_experiment(
    base: &OperatorSpec,
    f: &TargetFunction,
    grid: &Grid,
    variants: &TrendVariants,
) -> Result<TrendReport> {
    let specs = variants.specs(base)?;
    let rows: Vec<TrendRow> = specs
        .par_iter()
        .map(|spec| TrendRow {
            spec: *spec,
            sup_error: sup_error_with(&BernsteinOperator::new(*spec), f, grid),
        })
        .collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.sup_error).collect();
    Ok(TrendReport {
        kind: variants.kind(),
        base: *base,
        function: f.name().to_string(),
        grid_resolution: grid.resolution(),
        weakly_decreasing: weakly_decreasing(&errors),
        rows,
    })
}

/// `(x, f(x), B(f;x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub x: f64,
    pub f: f64,
    pub b: f64,
}

/// One sample per grid point, all sharing a single node vector.
pub fn curve_samples(spec: &OperatorSpec, f: &TargetFunction, grid: &Grid) -> Vec<CurveSample> {
    curve_samples_with(&BernsteinOperator::new(*spec), f, grid)
}

pub fn curve_samples_with(
    op: &BernsteinOperator,
    f: &TargetFunction,
    grid: &Grid,
) -> Vec<CurveSample> {
    let samples = op.sample(f);
    grid.points
        .par_iter()
        .map(|&x| CurveSample {
            x,
            f: f.eval(x),
            b: op.eval_samples(&samples, x),
        })
        .collect()
}

/// Target curve plus one operator curve per variant, on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub x: Vec<f64>,
    pub target: Vec<f64>,
    pub curves: Vec<Vec<f64>>,
    pub trend: TrendReport,
}

/// Column label for an operator curve.
pub fn curve_label(spec: &OperatorSpec) -> String {
    format!("B[n={};p={};q={}]", spec.n(), spec.p(), spec.q())
}

impl FigureData {
    pub fn to_table(&self) -> Table {
        let mut columns = vec!["x".to_string(), "f".to_string()];
        columns.extend(self.trend.rows.iter().map(|r| curve_label(&r.spec)));
        let mut table = Table::new(columns);
        table
            .param("figure", self.trend.kind)
            .param("function", &self.trend.function)
            .param("base_n", self.trend.base.n())
            .param("base_p", self.trend.base.p())
            .param("base_q", self.trend.base.q())
            .param("grid", self.trend.grid_resolution)
            .param("curves", self.curves.len());
        for (i, (&x, &f)) in self.x.iter().zip(&self.target).enumerate() {
            let mut row = vec![Cell::from(x), Cell::from(f)];
            row.extend(self.curves.iter().map(|c| Cell::from(c[i])));
            table.push_row(row);
        }
        for row in &self.trend.rows {
            table.verdict(
                format!("sup_error {}", curve_label(&row.spec)),
                row.sup_error,
            );
        }
        table.verdict("weakly_decreasing", self.trend.weakly_decreasing);
        table
    }
}

/// Curves for a figure. The curve order matches the trend order.
pub fn figure_data(
    base: &OperatorSpec,
    f: &TargetFunction,
    grid: &Grid,
    variants: &TrendVariants,
) -> Result<FigureData> {
    let specs = variants.specs(base)?;
    let curves: Vec<Vec<f64>> = specs
        .par_iter()
        .map(|spec| {
            curve_samples(spec, f, grid)
                .into_iter()
                .map(|s| s.b)
                .collect()
        })
        .collect();
    let rows: Vec<TrendRow> = specs
        .iter()
        .zip(&curves)
        .map(|(spec, curve)| TrendRow {
            spec: *spec,
            sup_error: grid
                .points
                .iter()
                .zip(curve)
                .map(|(&x, b)| (b - f.eval(x)).abs())
                .fold(0.0, f64::max),
        })
        .collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.sup_error).collect();
    Ok(FigureData {
        x: grid.points.clone(),
        target: grid.points.iter().map(|&x| f.eval(x)).collect(),
        curves,
        trend: TrendReport {
            kind: variants.kind(),
            base: *base,
            function: f.name().to_string(),
            grid_resolution: grid.resolution(),
            weakly_decreasing: weakly_decreasing(&errors),
            rows,
        },
    })
}
