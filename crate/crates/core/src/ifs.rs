//! One-parameter families of affine contractions `x -> r_i(u) x + t_i(u)` on the line.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::ParamPoly;
use crate::rational::RationalScalar;

/// Number of interior grid points (endpoints included) used to check that ratios
/// stay inside (0, 1) in absolute value.
pub const RATIO_CHECK_GRID: usize = 64;

/// `x -> ratio(u) * x + translation(u)`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMapSpec {
    pub ratio: ParamPoly,
    pub translation: ParamPoly,
}

impl AffineMapSpec {
    pub fn new(ratio: ParamPoly, translation: ParamPoly) -> Self {
        AffineMapSpec { ratio, translation }
    }

    /// Exact `(ratio(u), translation(u))`.
    pub fn eval(&self, u: &RationalScalar) -> (RationalScalar, RationalScalar) {
        (self.ratio.eval(u), self.translation.eval(u))
    }
}

/// `a ∘ b`: ratio `a.r * b.r`, translation `a.r * b.t + a.t`.
pub fn compose(a: &AffineMapSpec, b: &AffineMapSpec) -> AffineMapSpec {
    AffineMapSpec {
        ratio: &a.ratio * &b.ratio,
        translation: &(&a.ratio * &b.translation) + &a.translation,
    }
}

/// A finite word over the symbols `1..=m`, addressing a cylinder.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&s) = symbols.iter().find(|&&s| s == 0) {
            return Err(Error::SymbolOutOfRange { symbol: s, maps: 0 });
        }
        Ok(Word(symbols))
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, maps: usize) -> Result<()> {
        match self.0.iter().find(|&&s| s > maps) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, maps }),
            None => Ok(()),
        }
    }

    /// Word with the given lexicographic index among all words of length `len`
    /// over `m` symbols (index 0 is `1.1...1`).
    pub fn from_index(mut index: u64, len: usize, m: usize) -> Word {
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % m as u64) as usize + 1;
            index /= m as u64;
        }
        Word(symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .split('.')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A validated one-parameter family with weights.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    maps: Vec<AffineMapSpec>,
    interval: (RationalScalar, RationalScalar),
    weights: Vec<RationalScalar>,
    homogeneous_base: Option<u64>,
}

impl FamilySpec {
    /// Validates and builds a family. The homogeneous base `L` is detected when
    /// every ratio is the constant `1/L`.
    pub fn new(
        maps: Vec<AffineMapSpec>,
        interval: (RationalScalar, RationalScalar),
        weights: Vec<RationalScalar>,
    ) -> Result<Self> {
        if maps.len() < 2 {
            return Err(Error::InvalidFamily(format!(
                "need at least 2 maps, got {}",
                maps.len()
            )));
        }
        if weights.len() != maps.len() {
            return Err(Error::InvalidFamily(format!(
                "{} weights for {} maps",
                weights.len(),
                maps.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(Error::InvalidFamily(format!(
                "weight {} = {w} is not positive",
                i + 1
            )));
        }
        let total: RationalScalar = weights.iter().sum();
        if total != RationalScalar::one() {
            return Err(Error::InvalidFamily(format!(
                "weights sum to {total}, not 1"
            )));
        }
        if interval.0 >= interval.1 {
            return Err(Error::InvalidFamily(format!(
                "interval [{}, {}] is empty",
                interval.0, interval.1
            )));
        }

        let (lo, hi) = &interval;
        let step = (hi - lo) / RationalScalar::integer(RATIO_CHECK_GRID as i64 - 1);
        for k in 0..RATIO_CHECK_GRID {
            let u = lo + &(&step * &RationalScalar::integer(k as i64));
            for (i, m) in maps.iter().enumerate() {
                let r = m.ratio.eval(&u).abs();
                if r.is_zero() || r >= RationalScalar::one() {
                    return Err(Error::DegenerateRatio {
                        map: i + 1,
                        ratio: format!("{r} at u = {u}"),
                    });
                }
            }
        }

        let homogeneous_base = homogeneous_base_of(&maps);
        Ok(FamilySpec {
            maps,
            interval,
            weights,
            homogeneous_base,
        })
    }

    pub fn maps(&self) -> &[AffineMapSpec] {
        &self.maps
    }

    pub fn map_count(&self) -> usize {
        self.maps.len()
    }

    pub fn interval(&self) -> &(RationalScalar, RationalScalar) {
        &self.interval
    }

    pub fn weights(&self) -> &[RationalScalar] {
        &self.weights
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(RationalScalar::to_f64).collect()
    }

    pub fn homogeneous_base(&self) -> Option<u64> {
        self.homogeneous_base
    }

    pub fn require_base(&self) -> Result<u64> {
        self.homogeneous_base.ok_or(Error::NotHomogeneous)
    }

    pub fn contains(&self, u: &RationalScalar) -> bool {
        &self.interval.0 <= u && u <= &self.interval.1
    }

    pub fn contains_f64(&self, u: f64) -> bool {
        self.interval.0.to_f64() <= u && u <= self.interval.1.to_f64()
    }

    pub fn check_param(&self, u: &RationalScalar) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(self.out_of_range(u.to_string()))
        }
    }

    pub fn check_param_f64(&self, u: f64) -> Result<()> {
        if self.contains_f64(u) {
            Ok(())
        } else {
            Err(self.out_of_range(format!("{u:?}")))
        }
    }

    fn out_of_range(&self, param: String) -> Error {
        Error::ParameterOutOfRange {
            param,
            lo: self.interval.0.to_string(),
            hi: self.interval.1.to_string(),
        }
    }

    pub fn midpoint(&self) -> RationalScalar {
        (&self.interval.0 + &self.interval.1) / RationalScalar::integer(2)
    }

    /// Exact translation values `t_i(u)`.
    pub fn translations_at(&self, u: &RationalScalar) -> Vec<RationalScalar> {
        self.maps.iter().map(|m| m.translation.eval(u)).collect()
    }

    pub fn translations_at_f64(&self, u: f64) -> Vec<f64> {
        self.maps
            .iter()
            .map(|m| m.translation.eval_f64(u))
            .collect()
    }

    /// Shannon entropy of the weight vector in nats.
    pub fn weight_entropy(&self) -> f64 {
        self.weights_f64().iter().map(|&w| -w * w.ln()).sum()
    }

    /// Rigorous upper bound of `|p|` over the closed parameter interval.
    fn sup_on_interval(&self, p: &ParamPoly) -> RationalScalar {
        let center = self.midpoint();
        let radius = (&self.interval.1 - &self.interval.0) / RationalScalar::integer(2);
        let shift = ParamPoly::new(vec![center, RationalScalar::one()]);
        p.substitute(&shift).abs_bound(&radius)
    }

    /// Upper bound for `sup |t_i(u)|` over the interval and all maps.
    pub fn translation_bound(&self) -> RationalScalar {
        self.maps
            .iter()
            .map(|m| self.sup_on_interval(&m.translation))
            .max()
            .unwrap_or_else(RationalScalar::zero)
    }

    /// Upper bound for `sup |r_i(u)|` over the interval and all maps.
    pub fn ratio_bound(&self) -> RationalScalar {
        self.maps
            .iter()
            .map(|m| self.sup_on_interval(&m.ratio))
            .max()
            .unwrap_or_else(RationalScalar::zero)
    }

    /// Upper bound for `sup |dt_i/du|` over the interval and all maps.
    pub fn translation_slope_bound(&self) -> RationalScalar {
        self.maps
            .iter()
            .map(|m| self.sup_on_interval(&m.translation.derivative()))
            .max()
            .unwrap_or_else(RationalScalar::zero)
    }

    /// Support radius `xi = t_max / (1 - r_max)`: every measure of the family
    /// lives inside `(-xi, xi)`.
    pub fn support_radius(&self) -> Result<RationalScalar> {
        let r_max = self.ratio_bound();
        if r_max >= RationalScalar::one() {
            return Err(Error::DegenerateRatio {
                map: 0,
                ratio: format!("ratio bound {r_max} over the interval"),
            });
        }
        Ok(self.translation_bound() / (RationalScalar::one() - r_max))
    }

    /// Least common multiple of the reduced weight denominators.
    pub fn weight_lcm(&self) -> BigInt {
        crate::rational::lcm_of_denominators(&self.weights)
    }
}

fn homogeneous_base_of(maps: &[AffineMapSpec]) -> Option<u64> {
    let first = maps[0].ratio.as_constant()?;
    if !first.numer().is_one() {
        return None;
    }
    let base = first.denom().to_u64()?;
    if base < 2 {
        return None;
    }
    maps.iter()
        .all(|m| m.ratio.as_constant().as_ref() == Some(&first))
        .then_some(base)
}

/// Left-to-right fold `φ_{w1} ∘ φ_{w2} ∘ ... ∘ φ_{wn}`.
pub fn compose_word(f: &FamilySpec, w: &Word) -> Result<AffineMapSpec> {
    w.check(f.map_count())?;
    let mut iter = w.symbols().iter();
    let first = iter.next().ok_or(Error::EmptyWord)?;
    Ok(iter.fold(f.maps()[first - 1].clone(), |acc, &s| {
        compose(&acc, &f.maps()[s - 1])
    }))
}

/// `φ_w(0)` at a rational parameter, with the bound `xi * r_max^{|w|}` on its
/// distance to every projected point of the cylinder `[w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderPoint {
    pub value: RationalScalar,
    pub error_bound: RationalScalar,
}

pub fn cylinder_point(f: &FamilySpec, w: &Word, u: &RationalScalar) -> Result<CylinderPoint> {
    f.check_param(u)?;
    let map = compose_word(f, w)?;
    let value = map.translation.eval(u);
    let xi = f.support_radius()?;
    let error_bound = xi * f.ratio_bound().pow(w.len() as u32);
    Ok(CylinderPoint { value, error_bound })
}

fn dimension_from_ratios(f: &FamilySpec, ratios: &[f64], u: String) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, (&w, &r)) in f.weights_f64().iter().zip(ratios).enumerate() {
        let r = r.abs();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::DegenerateRatio {
                map: i + 1,
                ratio: format!("{r} at u = {u}"),
            });
        }
        num += w * w.ln();
        den += w * r.ln();
    }
    Ok(num / den)
}

/// `(Σ w_i log w_i) / (Σ w_i log |r_i(u)|)`.
pub fn similarity_dimension(f: &FamilySpec, u: &RationalScalar) -> Result<f64> {
    let ratios: Vec<f64> = f.maps().iter().map(|m| m.ratio.eval(u).to_f64()).collect();
    dimension_from_ratios(f, &ratios, u.to_string())
}

pub fn similarity_dimension_f64(f: &FamilySpec, u: f64) -> Result<f64> {
    let ratios: Vec<f64> = f.maps().iter().map(|m| m.ratio.eval_f64(u)).collect();
    dimension_from_ratios(f, &ratios, format!("{u:?}"))
}

/// Similarity dimension of the attractor: the root `s` of `Σ |r_i(u)|^s = 1`,
/// found by bisection.
pub fn attractor_similarity_dimension(f: &FamilySpec, u: &RationalScalar) -> Result<f64> {
    let ratios: Vec<f64> = f
        .maps()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let r = m.ratio.eval(u).abs().to_f64();
            if r > 0.0 && r < 1.0 {
                Ok(r)
            } else {
                Err(Error::DegenerateRatio {
                    map: i + 1,
                    ratio: format!("{r} at u = {u}"),
                })
            }
        })
        .collect::<Result<_>>()?;
    let pressure = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while pressure(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if pressure(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
