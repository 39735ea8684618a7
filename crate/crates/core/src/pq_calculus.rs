//! (p,q)-integers, factorials and binomial coefficients.
//!
//! The (p,q)-integer is `[k] = (p^k - q^k) / (p - q)`. It reduces to the
//! q-integer `(1 - q^k) / (1 - q)` at `p = 1` and to `k` in the limit
//! `p = q = 1`.

use crate::error::{Error, Result};

/// Largest operator degree accepted anywhere in the crate.
pub const MAX_DEGREE: usize = 200;

/// A validated parameter pair with `0 < q < p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PQParams {
    p: f64,
    q: f64,
}

impl PQParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if p.is_finite() && q.is_finite() && 0.0 < q && q < p && p <= 1.0 {
            Ok(Self { p, q })
        } else {
            Err(Error::InvalidParams { p, q })
        }
    }

    /// Like [`PQParams::new`] but also admits `p == q`.
    ///
    /// On the diagonal every formula in the crate takes its analytic limit,
    /// e.g. `[k] = k p^(k-1)`. Not part of the validated regime.
    pub fn new_allow_equal(p: f64, q: f64) -> Result<Self> {
        if p.is_finite() && q.is_finite() && 0.0 < q && q <= p && p <= 1.0 {
            Ok(Self { p, q })
        } else {
            Err(Error::InvalidParams { p, q })
        }
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q / p`, in `(0, 1]`.
    #[inline]
    pub fn ratio(&self) -> f64 {
        self.q / self.p
    }
}

/// `[k]_{p,q}`.
///
/// Evaluated as `[k] = p [k-1] + q^(k-1)`, a sum of positive terms, so there is
/// no cancellation when `p` and `q` are close.
pub fn pq_integer(k: usize, params: &PQParams) -> f64 {
    let (p, q) = (params.p, params.q);
    let mut value = 0.0;
    let mut q_pow = 1.0;
    for _ in 0..k {
        value = p * value + q_pow;
        q_pow *= q;
    }
    value
}

/// The q-integer `1 + r + ... + r^(k-1)`.
pub fn q_integer(k: usize, r: f64) -> f64 {
    let mut value = 0.0;
    for _ in 0..k {
        value = r * value + 1.0;
    }
    value
}

/// `[n]!_{p,q} = [1][2]...[n]`, with `[0]! = 1`.
pub fn pq_factorial(n: usize, params: &PQParams) -> f64 {
    (1..=n).map(|k| pq_integer(k, params)).product()
}

/// Row `n` of (p,q)-binomial coefficients, `C(n, 0..=n)`.
///
/// Filled with `C(n,k) = p^k C(n-1,k) + q^(n-k) C(n-1,k-1)`, which needs no
/// division.
pub fn pq_binomial_row(n: usize, params: &PQParams) -> Vec<f64> {
    let p_pow = powers(params.p, n);
    let q_pow = powers(params.q, n);
    let mut row = vec![0.0; n + 1];
    row[0] = 1.0;
    for m in 1..=n {
        row[m] = 1.0;
        for k in (1..m).rev() {
            row[k] = p_pow[k] * row[k] + q_pow[m - k] * row[k - 1];
        }
    }
    row
}

/// `C(n,k)_{p,q}`; zero when `k` is outside `0..=n`.
pub fn pq_binomial(n: usize, k: i64, params: &PQParams) -> f64 {
    match usize::try_from(k) {
        Ok(k) if k <= n => pq_binomial_row(n, params)[k],
        _ => 0.0,
    }
}

/// Factorial-ratio evaluation of `C(n,k)_{p,q}` by direct division.
pub fn pq_binomial_oracle(n: usize, k: usize, params: &PQParams) -> f64 {
    if k > n {
        return 0.0;
    }
    pq_factorial(n, params) / (pq_factorial(k, params) * pq_factorial(n - k, params))
}

/// Row `n` of Gaussian binomials in `r`, i.e. `p^(-k(n-k)) C(n,k)_{p,q}` with `r = q/p`.
///
/// Same recurrence as [`pq_binomial_row`] after dividing out `p^(k(n-k))`:
/// `S(n,k) = S(n-1,k) + r^(n-k) S(n-1,k-1)`. The rescaled entries stay
/// representable at degrees where the unscaled ones underflow.
pub fn gaussian_binomial_row(n: usize, r: f64) -> Vec<f64> {
    let r_pow = powers(r, n);
    let mut row = vec![0.0; n + 1];
    row[0] = 1.0;
    for m in 1..=n {
        row[m] = 1.0;
        for k in (1..m).rev() {
            row[k] += r_pow[m - k] * row[k - 1];
        }
    }
    row
}

/// `[base^0, base^1, ..., base^n]` by repeated multiplication.
pub(crate) fn powers(base: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        out.push(acc);
        acc *= base;
    }
    out
}
