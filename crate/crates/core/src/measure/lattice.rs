//! Exact level-n discretizations of the projected measure on an integer lattice.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ifs::{compose_word, FamilySpec, Word};
use crate::lattice::{convolve_sorted, step_fits, IntegerDigits};
use crate::rational::RationalScalar;

/// Maximum number of atoms held by one level.
pub const ATOM_BUDGET: usize = 1 << 25;

/// Maximum `m^n` accepted by [`brute_force_measure`].
pub const BRUTE_FORCE_WORDS: u64 = 1_000_000;

/// Level-n measure with atoms at `offset / lattice_denominator` carrying
/// `numerator / mass_denominator`. Offsets are strictly increasing, numerators
/// positive and summing to `mass_denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMeasure {
    level: usize,
    base: u64,
    lattice_denominator: u128,
    mass_denominator: u128,
    offsets: Vec<i64>,
    numerators: Vec<u128>,
}

impl LatticeMeasure {
    /// Builds a measure from raw parts, checking the invariants.
    pub fn from_parts(
        level: usize,
        base: u64,
        lattice_denominator: u128,
        mass_denominator: u128,
        offsets: Vec<i64>,
        numerators: Vec<u128>,
    ) -> Result<Self> {
        if offsets.len() != numerators.len() {
            return Err(Error::Invalid("offset and mass counts differ".into()));
        }
        if offsets.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("offsets must be strictly increasing".into()));
        }
        if numerators.contains(&0) {
            return Err(Error::Invalid("masses must be positive".into()));
        }
        let total = numerators
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::Invalid("mass overflow".into()))?;
        if total != mass_denominator || lattice_denominator == 0 {
            return Err(Error::Invalid(format!(
                "masses sum to {total}/{mass_denominator}, not 1"
            )));
        }
        Ok(LatticeMeasure {
            level,
            base,
            lattice_denominator,
            mass_denominator,
            offsets,
            numerators,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn lattice_denominator(&self) -> u128 {
        self.lattice_denominator
    }

    pub fn mass_denominator(&self) -> u128 {
        self.mass_denominator
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn numerators(&self) -> &[u128] {
        &self.numerators
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn mass(&self, k: usize) -> RationalScalar {
        RationalScalar::from_bigs(
            BigInt::from(self.numerators[k]),
            BigInt::from(self.mass_denominator),
        )
        .expect("mass denominator is positive")
    }

    pub fn position(&self, k: usize) -> RationalScalar {
        RationalScalar::from_bigs(
            BigInt::from(self.offsets[k]),
            BigInt::from(self.lattice_denominator),
        )
        .expect("lattice denominator is positive")
    }

    pub fn position_f64(&self, k: usize) -> f64 {
        self.offsets[k] as f64 / self.lattice_denominator as f64
    }

    pub fn mass_f64(&self, k: usize) -> f64 {
        self.numerators[k] as f64 / self.mass_denominator as f64
    }

    /// Exact total mass.
    pub fn total_mass(&self) -> RationalScalar {
        let sum: BigInt = self.numerators.iter().map(|&c| BigInt::from(c)).sum();
        RationalScalar::from_bigs(sum, BigInt::from(self.mass_denominator)).unwrap()
    }

    /// `(position, mass)` pairs as exact rationals.
    pub fn atoms(&self) -> Vec<(RationalScalar, RationalScalar)> {
        (0..self.len())
            .map(|k| (self.position(k), self.mass(k)))
            .collect()
    }

    /// Shannon entropy in nats, computed as `ln D - Σ c ln c / D` over integer
    /// numerators `c` against the common denominator `D`.
    pub fn entropy_nats(&self) -> f64 {
        let den = self.mass_denominator as f64;
        let mut sum = 0.0;
        let mut comp = 0.0;
        for &c in &self.numerators {
            if c > 1 {
                let c = c as f64;
                let term = c * c.ln() / den;
                // Neumaier summation
                let t = sum + term;
                if sum.abs() >= term.abs() {
                    comp += (sum - t) + term;
                } else {
                    comp += (term - t) + sum;
                }
                sum = t;
            }
        }
        (den.ln() - (sum + comp)).max(0.0)
    }
}

/// Per-level context: grouped digits with summed weight numerators.
struct LevelContext {
    digits: IntegerDigits,
    weighted: Vec<(i64, u128)>,
    weight_denominator: u128,
}

impl LevelContext {
    fn new(f: &FamilySpec, u: &RationalScalar) -> Result<Self> {
        let digits = IntegerDigits::new(f, u)?;
        let lcm = f.weight_lcm();
        let weight_denominator = lcm
            .to_u128()
            .ok_or_else(|| Error::Invalid(format!("weight denominator {lcm} too large")))?;
        let numerators: Vec<u128> = f
            .weights()
            .iter()
            .map(|w| (w.numer() * (&lcm / w.denom())).to_u128().unwrap())
            .collect();
        let weighted = digits
            .grouped()
            .into_iter()
            .map(|(d, maps)| (d, maps.iter().map(|&i| numerators[i]).sum()))
            .collect();
        Ok(LevelContext {
            digits,
            weighted,
            weight_denominator,
        })
    }

    fn first(&self) -> LatticeMeasure {
        LatticeMeasure {
            level: 1,
            base: self.digits.base,
            lattice_denominator: self.digits.denom as u128,
            mass_denominator: self.weight_denominator,
            offsets: self.weighted.iter().map(|&(d, _)| d).collect(),
            numerators: self.weighted.iter().map(|&(_, c)| c).collect(),
        }
    }

    fn advance(&self, prev: &LatticeMeasure, budget: usize) -> Result<LatticeMeasure> {
        let n = prev.level + 1;
        let over = |reason: String| Error::BudgetExceeded {
            depth: n,
            feasible: prev.level,
            reason,
        };
        let base = self.digits.base;
        let (dmin, dmax) = (self.weighted[0].0, self.weighted.last().unwrap().0);
        let (lo, hi) = (prev.offsets[0], *prev.offsets.last().unwrap());
        if !step_fits(lo, hi, base as i64, dmin, dmax) {
            return Err(over("lattice offsets overflow 64-bit integers".into()));
        }
        let lattice_denominator = prev
            .lattice_denominator
            .checked_mul(base as u128)
            .ok_or_else(|| over("lattice denominator overflows 128 bits".into()))?;
        let mass_denominator = prev
            .mass_denominator
            .checked_mul(self.weight_denominator)
            .ok_or_else(|| over("mass denominator overflows 128 bits".into()))?;
        // Support is bounded both by atoms x digits and by the offset span.
        let by_count = prev.len() as u128 * self.weighted.len() as u128;
        let by_span = hi.abs_diff(lo) as u128 * base as u128 + dmax.abs_diff(dmin) as u128 + 1;
        if by_count.min(by_span) > budget as u128 {
            return Err(over(format!(
                "support may exceed the budget of {budget} atoms"
            )));
        }
        let (offsets, numerators) = convolve_sorted(
            &prev.offsets,
            &prev.numerators,
            base as i64,
            &self.weighted,
            |m, c| m * c,
            |a, b| *a += b,
        );
        Ok(LatticeMeasure {
            level: n,
            base,
            lattice_denominator,
            mass_denominator,
            offsets,
            numerators,
        })
    }
}

/// Successive exact levels `1, 2, ...` of one family at one parameter.
pub struct LevelMeasures {
    ctx: LevelContext,
    current: Option<LatticeMeasure>,
    budget: usize,
}

impl LevelMeasures {
    pub fn new(f: &FamilySpec, u: &RationalScalar) -> Result<Self> {
        Ok(LevelMeasures {
            ctx: LevelContext::new(f, u)?,
            current: None,
            budget: ATOM_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Builds the next level and returns it; the previous level is dropped.
    pub fn advance(&mut self) -> Result<&LatticeMeasure> {
        let next = match &self.current {
            None => self.ctx.first(),
            Some(prev) => self.ctx.advance(prev, self.budget)?,
        };
        Ok(self.current.insert(next))
    }

    pub fn into_current(self) -> Option<LatticeMeasure> {
        self.current
    }
}

/// Exact distribution of `Σ_{k<=n} t_{i_k}(u) L^{-(k-1)}` under the product
/// measure, built by `n - 1` sorted convolution passes.
pub fn exact_level_measure(f: &FamilySpec, u: &RationalScalar, n: usize) -> Result<LatticeMeasure> {
    if n == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let mut levels = LevelMeasures::new(f, u)?;
    for _ in 0..n {
        levels.advance()?;
    }
    Ok(levels.into_current().expect("at least one level built"))
}

/// Oracle: enumerates all `m^n` words, evaluates each base point through
/// polynomial composition, and groups equal points exactly.
pub fn brute_force_measure(f: &FamilySpec, u: &RationalScalar, n: usize) -> Result<LatticeMeasure> {
    let base = f.require_base()?;
    f.check_param(u)?;
    let m = f.map_count();
    if n == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let words = (m as u64)
        .checked_pow(n as u32)
        .filter(|&w| w <= BRUTE_FORCE_WORDS)
        .ok_or_else(|| Error::BudgetExceeded {
            depth: n,
            feasible: (1..)
                .take_while(|&k| (m as u64).pow(k as u32) <= BRUTE_FORCE_WORDS)
                .last()
                .unwrap_or(0),
            reason: format!("{m}^{n} words exceed {BRUTE_FORCE_WORDS}"),
        })?;

    let mut grouped: BTreeMap<RationalScalar, RationalScalar> = BTreeMap::new();
    for index in 0..words {
        let word = Word::from_index(index, n, m);
        let point = compose_word(f, &word)?.translation.eval(u);
        let weight = word
            .symbols()
            .iter()
            .fold(RationalScalar::one(), |acc, &s| acc * &f.weights()[s - 1]);
        let slot = grouped.entry(point).or_insert_with(RationalScalar::zero);
        *slot = &*slot + &weight;
    }

    let q = crate::rational::lcm_of_denominators(&f.translations_at(u));
    let lattice_den = q * num_traits::pow(BigInt::from(base), n - 1);
    let mass_den = num_traits::pow(f.weight_lcm(), n);
    let mut offsets = Vec::with_capacity(grouped.len());
    let mut numerators = Vec::with_capacity(grouped.len());
    for (point, mass) in grouped {
        let scaled = &point * &RationalScalar::from(lattice_den.clone());
        let offset = scaled
            .is_integer()
            .then(|| scaled.numer().to_i64())
            .flatten()
            .ok_or_else(|| Error::Invalid(format!("point {point} is off the lattice")))?;
        let c = &mass * &RationalScalar::from(mass_den.clone());
        let c = c
            .is_integer()
            .then(|| c.numer().to_u128())
            .flatten()
            .ok_or_else(|| Error::Invalid(format!("mass {mass} is off the common denominator")))?;
        offsets.push(offset);
        numerators.push(c);
    }
    if offsets.is_empty() || mass_den.is_zero() {
        return Err(Error::EmptyMeasure);
    }
    LatticeMeasure::from_parts(
        n,
        base,
        lattice_den
            .to_u128()
            .ok_or_else(|| Error::Invalid("lattice denominator overflow".into()))?,
        mass_den
            .to_u128()
            .ok_or_else(|| Error::Invalid("mass denominator overflow".into()))?,
        offsets,
        numerators,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::carpet_family;

    fn r(p: i64, q: i64) -> RationalScalar {
        RationalScalar::new(p, q)
    }

    #[test]
    fn carpet_slope_one_level_one() {
        let m = exact_level_measure(&carpet_family(), &r(1, 1), 1).unwrap();
        assert_eq!(m.offsets(), &[0, 1, 2, 3, 4]);
        let masses: Vec<RationalScalar> = (0..m.len()).map(|k| m.mass(k)).collect();
        assert_eq!(masses, vec![r(1, 8), r(1, 4), r(1, 4), r(1, 4), r(1, 8)]);
    }

    #[test]
    fn carpet_slope_third_level_one() {
        let m = exact_level_measure(&carpet_family(), &r(1, 3), 1).unwrap();
        assert_eq!(m.len(), 8);
        assert!((0..8).all(|k| m.mass(k) == r(1, 8)));
    }

    #[test]
    fn normalization_every_level() {
        let f = carpet_family();
        let mut levels = LevelMeasures::new(&f, &r(2, 5)).unwrap();
        for _ in 0..6 {
            assert_eq!(
                levels.advance().unwrap().total_mass(),
                RationalScalar::one()
            );
        }
    }

    #[test]
    fn brute_force_max_atom() {
        let m = brute_force_measure(&carpet_family(), &r(1, 1), 1).unwrap();
        let max = (0..m.len()).map(|k| m.mass(k)).max().unwrap();
        assert_eq!(max, r(2, 8));
    }

    #[test]
    fn brute_force_depth_limit() {
        let err = brute_force_measure(&carpet_family(), &r(1, 1), 7).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { feasible: 6, .. }));
    }

    #[test]
    fn budget_is_reported() {
        let mut levels = LevelMeasures::new(&carpet_family(), &r(1, 1))
            .unwrap()
            .with_budget(100);
        let err = (0..10).find_map(|_| levels.advance().err()).unwrap();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn non_homogeneous_rejected() {
        let s = crate::presets::sandor_family(&r(1, 100)).unwrap();
        assert_eq!(
            exact_level_measure(&s, &r(34, 100), 2).unwrap_err(),
            Error::NotHomogeneous
        );
    }

    #[test]
    fn from_parts_checks() {
        assert!(LatticeMeasure::from_parts(1, 3, 1, 2, vec![0, 1], vec![1, 1]).is_ok());
        assert!(LatticeMeasure::from_parts(1, 3, 1, 3, vec![0, 1], vec![1, 1]).is_err());
        assert!(LatticeMeasure::from_parts(1, 3, 1, 2, vec![1, 0], vec![1, 1]).is_err());
        assert!(LatticeMeasure::from_parts(1, 3, 1, 2, vec![], vec![]).is_err());
    }
}
