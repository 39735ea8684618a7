//! Target functions on `[0, 1]`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Built-in functions, addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `(x - 1/3)(x - 1/2)(x - 3/4)`, the cubic used in the illustrative figures.
    PaperCubic,
    /// `x^m` for `m` in `{0, 1, 2}`.
    Monomial(u8),
    /// `|x - 1/2|`
    AbsCentered,
    Exp,
    /// `sin(pi x)`
    SinPi,
}

impl Builtin {
    pub const ALL: [Builtin; 7] = [
        Builtin::PaperCubic,
        Builtin::Monomial(0),
        Builtin::Monomial(1),
        Builtin::Monomial(2),
        Builtin::AbsCentered,
        Builtin::Exp,
        Builtin::SinPi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::PaperCubic => "paper_cubic",
            Builtin::Monomial(0) => "monomial_0",
            Builtin::Monomial(1) => "monomial_1",
            Builtin::Monomial(2) => "monomial_2",
            Builtin::Monomial(_) => unreachable!("only monomials 0..=2 are registered"),
            Builtin::AbsCentered => "abs_centered",
            Builtin::Exp => "exp",
            Builtin::SinPi => "sin_pi",
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            Builtin::PaperCubic => (x - 1.0 / 3.0) * (x - 0.5) * (x - 0.75),
            Builtin::Monomial(m) => x.powi(*m as i32),
            Builtin::AbsCentered => (x - 0.5).abs(),
            Builtin::Exp => x.exp(),
            Builtin::SinPi => (PI * x).sin(),
        }
    }
}

/// A real function evaluable on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetFunction {
    Builtin(Builtin),
    /// Monomial-basis coefficients `c0, c1, ...`, evaluated by Horner's scheme.
    Polynomial {
        name: String,
        coeffs: Vec<f64>,
    },
}

impl TargetFunction {
    pub fn known_names() -> Vec<&'static str> {
        Builtin::ALL.iter().map(Builtin::name).collect()
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Builtin::ALL
            .iter()
            .find(|b| b.name() == name)
            .map(|&b| TargetFunction::Builtin(b))
            .ok_or_else(|| Error::UnknownFunction {
                name: name.to_string(),
                known: Self::known_names().join(", "),
            })
    }

    pub fn monomial(m: u8) -> Result<Self> {
        if m <= 2 {
            Ok(TargetFunction::Builtin(Builtin::Monomial(m)))
        } else {
            Err(Error::UnsupportedMoment(m as u32))
        }
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("no coefficients".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial(format!(
                "non-finite coefficient {c}"
            )));
        }
        let name = format!(
            "poly[{}]",
            coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";")
        );
        Ok(TargetFunction::Polynomial { name, coeffs })
    }

    /// Parses `c0,c1,c2,...`.
    pub fn parse_polynomial(text: &str) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidPolynomial(format!("`{}`: {e}", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::polynomial(coeffs)
    }

    pub fn name(&self) -> &str {
        match self {
            TargetFunction::Builtin(b) => b.name(),
            TargetFunction::Polynomial { name, .. } => name,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TargetFunction::Builtin(b) => b.eval(x),
            TargetFunction::Polynomial { coeffs, .. } => horner(coeffs, x),
        }
    }
}

impl fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}
