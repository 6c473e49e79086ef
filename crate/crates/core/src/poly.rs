//! Univariate polynomials in the family parameter with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::RationalScalar;

/// `coeffs[k]` is the coefficient of `u^k`. Trailing zeros are never stored, so
/// the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    coeffs: Vec<RationalScalar>,
}

impl ParamPoly {
    pub fn new(mut coeffs: Vec<RationalScalar>) -> Self {
        while coeffs.last().is_some_and(RationalScalar::is_zero) {
            coeffs.pop();
        }
        ParamPoly { coeffs }
    }

    pub fn zero() -> Self {
        ParamPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: RationalScalar) -> Self {
        Self::new(vec![c])
    }

    /// `c * u^k`
    pub fn monomial(c: RationalScalar, k: usize) -> Self {
        let mut coeffs = vec![RationalScalar::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The polynomial `u`.
    pub fn var() -> Self {
        Self::monomial(RationalScalar::one(), 1)
    }

    /// Builds from integer-over-common-denominator pairs, e.g. `[(1,3)]` for `1/3`.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(p, q)| RationalScalar::new(p, q))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[RationalScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RationalScalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(RationalScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<RationalScalar> {
        match self.coeffs.len() {
            0 => Some(RationalScalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Exact evaluation (Horner).
    pub fn eval(&self, u: &RationalScalar) -> RationalScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(RationalScalar::zero(), |acc, c| acc * u + c)
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c.to_f64())
    }

    pub fn scale(&self, c: &RationalScalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * &RationalScalar::integer(k as i64))
                .collect(),
        )
    }

    /// Substitution `self(inner(u))`.
    pub fn substitute(&self, inner: &ParamPoly) -> Self {
        self.coeffs.iter().rev().fold(ParamPoly::zero(), |acc, c| {
            &(&acc * inner) + &ParamPoly::constant(c.clone())
        })
    }

    /// Upper bound on `|p(u)|` over `|u| <= radius` from the triangle inequality.
    pub fn abs_bound(&self, radius: &RationalScalar) -> RationalScalar {
        let radius = radius.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(RationalScalar::zero(), |acc, c| acc * &radius + c.abs())
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        let mut out = vec![RationalScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ParamPoly::new(out)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})u")?,
                _ => write!(f, "({c})u^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(ParamPoly::new(Vec::<RationalScalar>::deserialize(
            deserializer,
        )?))
    }
}
