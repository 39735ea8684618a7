//! The (p,q)-Bernstein operator and the uncorrected variant it replaces.
//!
//! The corrected operator is
//!
//! ```text
//! B(f;x) = p^(-n(n-1)/2) sum_k C(n,k) p^(k(k-1)/2) x^k prod_{s<n-k} (p^s - q^s x) f(t_k)
//! t_k    = p^(n-k) [k] / [n]
//! ```
//!
//! and the uncorrected one drops the `p`-power normalisation and samples at
//! `[k] / [n]`. Both are evaluated in a rescaled form: with `r = q/p`,
//!
//! ```text
//! C(n,k)_{p,q}          = p^(k(n-k))          * G(n,k)_r
//! prod (p^s - q^s x)    = p^((n-k)(n-k-1)/2)  * prod (1 - r^s x)
//! ```
//!
//! where `G` is the Gaussian binomial in `r`. Every `p`-power then collects
//! into one integer exponent per term (see [`p_exponent`]), which is zero for
//! the corrected operator. Nothing of size `p^(n(n-1)/2)` is ever formed.

use crate::error::{Error, Result};
use crate::function::TargetFunction;
use crate::pq_calculus::{
    gaussian_binomial_row, powers, pq_integer, q_integer, PQParams, MAX_DEGREE,
};
use crate::sum::CompensatedSum;

/// Degree `n` together with its parameters; identifies one operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    n: usize,
    params: PQParams,
}

impl OperatorSpec {
    pub fn new(n: usize, params: PQParams) -> Result<Self> {
        if (1..=MAX_DEGREE).contains(&n) {
            Ok(Self { n, params })
        } else {
            Err(Error::DegreeOutOfRange(n))
        }
    }

    /// Shorthand for `OperatorSpec::new(n, PQParams::new(p, q)?)`.
    pub fn from_parts(n: usize, p: f64, q: f64) -> Result<Self> {
        Self::new(n, PQParams::new(p, q)?)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn params(&self) -> &PQParams {
        &self.params
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.params.p()
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.params.q()
    }
}

/// Which operator formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// The normalised operator; reproduces constants and linear functions.
    Corrected,
    /// The earlier formula without the `p`-power normaliser. It does not
    /// reproduce constants for `p < 1` and is kept only as a diagnostic.
    Uncorrected,
}

/// Basis values `b_{n,0}(x), ..., b_{n,n}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisVector {
    values: Vec<f64>,
    at_x: f64,
}

impl BasisVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at_x(&self) -> f64 {
        self.at_x
    }

    /// Compensated sum of the entries.
    pub fn total(&self) -> f64 {
        self.values.iter().copied().sum::<CompensatedSum>().value()
    }
}

/// Sampling nodes `t_{n,0}, ..., t_{n,n}`.
///
/// For the corrected operator these run strictly from 0 to 1. The uncorrected
/// nodes `[k]/[n]` carry no such guarantee and may exceed 1 when `p < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeVector {
    values: Vec<f64>,
}

impl NodeVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Integer power of `p` multiplying term `k` once the binomial and the
/// product have been rescaled to `r = q/p`.
fn p_exponent(variant: Variant, n: usize, k: usize) -> i64 {
    let (n, k) = (n as i64, k as i64);
    let from_binomial = k * (n - k);
    let from_product = (n - k) * (n - k - 1) / 2;
    match variant {
        Variant::Corrected => {
            let normaliser = k * (k - 1) / 2 - n * (n - 1) / 2;
            normaliser + from_binomial + from_product
        }
        Variant::Uncorrected => from_binomial + from_product,
    }
}

fn check_point(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::PointOutOfRange(x))
    }
}

/// An operator with its `x`-independent parts precomputed.
///
/// Building one costs `O(n^2)`; each evaluation afterwards is `O(n)`.
#[derive(Debug, Clone)]
pub struct BernsteinOperator {
    spec: OperatorSpec,
    variant: Variant,
    /// `p^e_k * G(n,k)_r`
    weights: Vec<f64>,
    /// `r^0, ..., r^(n-1)`
    ratio_powers: Vec<f64>,
    nodes: NodeVector,
}

impl BernsteinOperator {
    pub fn new(spec: OperatorSpec) -> Self {
        Self::with_variant(spec, Variant::Corrected)
    }

    pub fn uncorrected(spec: OperatorSpec) -> Self {
        Self::with_variant(spec, Variant::Uncorrected)
    }

    pub fn with_variant(spec: OperatorSpec, variant: Variant) -> Self {
        let n = spec.n;
        let p = spec.p();
        let r = spec.params.ratio();
        let weights = gaussian_binomial_row(n, r)
            .into_iter()
            .enumerate()
            .map(|(k, g)| match p_exponent(variant, n, k) {
                0 => g,
                e => g * p.powi(e as i32),
            })
            .collect();
        let nodes = match variant {
            Variant::Corrected => corrected_nodes(&spec),
            Variant::Uncorrected => {
                let top = pq_integer(n, &spec.params);
                NodeVector {
                    values: (0..=n).map(|k| pq_integer(k, &spec.params) / top).collect(),
                }
            }
        };
        let mut ratio_powers = powers(r, n);
        ratio_powers.pop();
        Self {
            spec,
            variant,
            weights,
            ratio_powers,
            nodes,
        }
    }

    pub fn spec(&self) -> &OperatorSpec {
        &self.spec
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn nodes(&self) -> &NodeVector {
        &self.nodes
    }

    pub fn basis(&self, x: f64) -> Result<BasisVector> {
        check_point(x)?;
        Ok(BasisVector {
            values: self.basis_values(x),
            at_x: x,
        })
    }

    fn basis_values(&self, x: f64) -> Vec<f64> {
        let n = self.spec.n;
        // tail[m] = prod_{s<m} (1 - r^s x)
        let mut tail = Vec::with_capacity(n + 1);
        let mut acc = 1.0;
        tail.push(acc);
        for &rs in &self.ratio_powers {
            acc *= 1.0 - rs * x;
            tail.push(acc);
        }
        let mut x_pow = 1.0;
        self.weights
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let b = w * x_pow * tail[n - k];
                x_pow *= x;
                b
            })
            .collect()
    }

    /// `f` sampled at the nodes.
    pub fn sample(&self, f: &TargetFunction) -> Vec<f64> {
        self.nodes.values.iter().map(|&t| f.eval(t)).collect()
    }

    /// Evaluates the operator given `f` already sampled at the nodes.
    pub fn apply_samples(&self, samples: &[f64], x: f64) -> Result<f64> {
        check_point(x)?;
        Ok(self.eval_samples(samples, x))
    }

    /// [`Self::apply_samples`] for a point already known to lie in `[0, 1]`.
    pub(crate) fn eval_samples(&self, samples: &[f64], x: f64) -> f64 {
        assert_eq!(samples.len(), self.spec.n + 1, "one sample per node");
        self.basis_values(x)
            .iter()
            .zip(samples)
            .map(|(b, s)| b * s)
            .sum::<CompensatedSum>()
            .value()
    }

    pub fn apply(&self, f: &TargetFunction, x: f64) -> Result<f64> {
        check_point(x)?;
        self.apply_samples(&self.sample(f), x)
    }
}

/// `t_k = p^(n-k) [k] / [n] = [k]_r / [n]_r`.
fn corrected_nodes(spec: &OperatorSpec) -> NodeVector {
    let n = spec.n;
    let r = spec.params.ratio();
    let top = q_integer(n, r);
    let mut values: Vec<f64> = (0..=n).map(|k| q_integer(k, r) / top).collect();
    values[n] = 1.0;
    NodeVector { values }
}

pub fn basis(spec: &OperatorSpec, x: f64) -> Result<BasisVector> {
    BernsteinOperator::new(*spec).basis(x)
}

pub fn nodes(spec: &OperatorSpec) -> NodeVector {
    corrected_nodes(spec)
}

/// `B_{n,p,q}(f; x)` for the corrected operator.
pub fn apply_operator(spec: &OperatorSpec, f: &TargetFunction, x: f64) -> Result<f64> {
    BernsteinOperator::new(*spec).apply(f, x)
}

/// The uncorrected operator; see [`Variant::Uncorrected`].
pub fn apply_operator_original(spec: &OperatorSpec, f: &TargetFunction, x: f64) -> Result<f64> {
    BernsteinOperator::uncorrected(*spec).apply(f, x)
}

/// Closed-form images of `1`, `t` and `t^2`:
/// `1`, `x`, and `p^(n-1)/[n] x + q[n-1]/[n] x^2`.
pub fn moment_closed_form(spec: &OperatorSpec, m: u32, x: f64) -> Result<f64> {
    check_point(x)?;
    match m {
        0 => Ok(1.0),
        1 => Ok(x),
        2 => {
            // p^(n-1)/[n] = 1/[n]_r and q[n-1]/[n] = r[n-1]_r/[n]_r
            let n = spec.n;
            let r = spec.params.ratio();
            let top = q_integer(n, r);
            Ok(x / top + r * q_integer(n - 1, r) / top * x * x)
        }
        _ => Err(Error::UnsupportedMoment(m)),
    }
}

/// `|q[n-1] - ([n] - p^(n-1))|`, which vanishes up to rounding.
pub fn second_moment_identity_check(spec: &OperatorSpec) -> f64 {
    let n = spec.n;
    let (p, q) = (spec.p(), spec.q());
    let lhs = q * pq_integer(n - 1, &spec.params);
    let rhs = pq_integer(n, &spec.params) - p.powi(n as i32 - 1);
    (lhs - rhs).abs()
}
