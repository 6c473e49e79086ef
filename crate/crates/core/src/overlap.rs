//! Exact overlaps, cylinder separation `Δ_n` and the non-degeneracy rank test.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::class::translation_rank;
use crate::error::{Error, Result};
use crate::ifs::{compose_word, FamilySpec, Word};
use crate::lattice::{convolve_sorted, step_fits, IntegerDigits};
use crate::param::Param;
use crate::rational::RationalScalar;

/// Upper bound on `m^n` words enumerated by [`overlap_search`].
pub const OVERLAP_WORD_BUDGET: u64 = 1 << 22;

/// Upper bound on level values held by [`separation_profile`] (`m^n` on the
/// float path, distinct values on the exact path).
pub const SEPARATION_BUDGET: u64 = 1 << 27;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "param", rename_all = "snake_case")]
pub enum OverlapKind {
    AtParameter(RationalScalar),
    Identical,
}

/// Two distinct words whose composed maps coincide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapWitness {
    pub word_i: Word,
    pub word_j: Word,
    pub kind: OverlapKind,
}

impl fmt::Display for OverlapWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OverlapKind::AtParameter(u) => write!(f, "{} {} at {}", self.word_i, self.word_j, u),
            OverlapKind::Identical => write!(f, "{} {} identical", self.word_i, self.word_j),
        }
    }
}

/// True iff the two composed maps have identical ratio and translation at `u`.
pub fn exact_overlap_at(f: &FamilySpec, u: &RationalScalar, w1: &Word, w2: &Word) -> Result<bool> {
    f.check_param(u)?;
    let a = compose_word(f, w1)?;
    let b = compose_word(f, w2)?;
    Ok(a.eval(u) == b.eval(u))
}

/// True iff the composed maps agree coefficient-wise as polynomials in `u`.
pub fn exact_overlap_identically(f: &FamilySpec, w1: &Word, w2: &Word) -> Result<bool> {
    Ok(compose_word(f, w1)? == compose_word(f, w2)?)
}

fn check_depth_budget(m: usize, n: usize, budget: u64) -> Result<()> {
    let feasible = (1..)
        .take_while(|&k| {
            (m as u64)
                .checked_pow(k as u32)
                .is_some_and(|c| c <= budget)
        })
        .last()
        .unwrap_or(0);
    if n > feasible {
        return Err(Error::BudgetExceeded {
            depth: n,
            feasible,
            reason: format!("{m}^{n} words exceed the budget of {budget}"),
        });
    }
    Ok(())
}

/// Exact integer values `V(w)` for every word of length `n`, indexed lexicographically.
fn level_values(digits: &IntegerDigits, n: usize) -> Result<Vec<i64>> {
    let base = digits.base as i64;
    let dmin = *digits.digits.iter().min().unwrap();
    let dmax = *digits.digits.iter().max().unwrap();
    let mut values = digits.digits.clone();
    for depth in 2..=n {
        let lo = *values.iter().min().unwrap();
        let hi = *values.iter().max().unwrap();
        if !step_fits(lo, hi, base, dmin, dmax) {
            return Err(Error::BudgetExceeded {
                depth,
                feasible: depth - 1,
                reason: "lattice offsets overflow 64-bit integers".into(),
            });
        }
        values = values
            .iter()
            .flat_map(|&v| digits.digits.iter().map(move |&d| base * v + d))
            .collect();
    }
    Ok(values)
}

/// Enumerates words of each length `n <= n_max`, groups them by exact base point
/// at `u`, and reports one witness per colliding class: the lexicographically
/// least pair whose words differ in both first and last symbol. Pairs sharing a
/// first or last symbol are extensions of a shallower collision and are skipped.
pub fn overlap_search(
    f: &FamilySpec,
    u: &RationalScalar,
    n_max: usize,
) -> Result<Vec<OverlapWitness>> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    let digits = IntegerDigits::new(f, u)?;
    let m = f.map_count();
    check_depth_budget(m, n_max, OVERLAP_WORD_BUDGET)?;
    let mut witnesses = Vec::new();
    for n in 1..=n_max {
        let values = level_values(&digits, n)?;
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        order.sort_unstable_by_key(|&i| (values[i as usize], i));
        let lead = (m as u64).pow(n as u32 - 1);
        let first = |i: u32| i as u64 / lead;
        let last = |i: u32| i as u64 % m as u64;

        let mut start = 0;
        while start < order.len() {
            let v = values[order[start] as usize];
            let mut end = start + 1;
            while end < order.len() && values[order[end] as usize] == v {
                end += 1;
            }
            let class = &order[start..end];
            'class: for (k, &a) in class.iter().enumerate() {
                for &b in &class[k + 1..] {
                    if first(a) != first(b) && last(a) != last(b) {
                        witnesses.push(OverlapWitness {
                            word_i: Word::from_index(a as u64, n, m),
                            word_j: Word::from_index(b as u64, n, m),
                            kind: OverlapKind::AtParameter(u.clone()),
                        });
                        break 'class;
                    }
                }
            }
            start = end;
        }
    }
    Ok(witnesses)
}

/// Finite-depth separation data: `Δ_n` as the least positive gap between
/// distinct level-n base points, a flag for coinciding base points, and
/// `ρ_n = min(Δ_n^(1/n), 1)` as an empirical Condition-H sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationProfile {
    pub depths: Vec<usize>,
    pub delta_n: Vec<Param>,
    pub has_collision: Vec<bool>,
    pub rho_n: Vec<f64>,
}

impl SeparationProfile {
    fn push(&mut self, n: usize, delta: Param, collision: bool) {
        let d = delta.to_f64();
        let rho = if d > 0.0 {
            d.powf(1.0 / n as f64).min(1.0)
        } else {
            0.0
        };
        self.depths.push(n);
        self.delta_n.push(delta);
        self.has_collision.push(collision);
        self.rho_n.push(rho);
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    /// One line per depth: `n<TAB>delta_n<TAB>has_collision<TAB>rho_n`.
    pub fn to_lines(&self) -> String {
        let mut out = String::from("depth\tdelta_n\thas_collision\trho_n\n");
        for k in 0..self.len() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.12}\n",
                self.depths[k], self.delta_n[k], self.has_collision[k], self.rho_n[k]
            ));
        }
        out
    }
}

/// Largest depth whose `m^n` stays within [`SEPARATION_BUDGET`].
pub fn default_separation_depth(m: usize) -> usize {
    (1..)
        .take_while(|&k| {
            (m as u64)
                .checked_pow(k as u32)
                .is_some_and(|c| c <= SEPARATION_BUDGET)
        })
        .last()
        .unwrap_or(1)
}

pub fn separation_profile(f: &FamilySpec, u: &Param, n_max: usize) -> Result<SeparationProfile> {
    if n_max == 0 {
        return Err(Error::Invalid("n_max must be at least 1".into()));
    }
    match u {
        Param::Exact(u) => separation_exact(f, u, n_max),
        Param::Float(x) => separation_float(f, *x, n_max),
    }
}

/// Exact path: distinct level values evolve as a sorted set under
/// `S_n = L S_(n-1) + D`, so no word enumeration is needed; a collision exists
/// iff fewer than `m^n` distinct values remain.
fn separation_exact(f: &FamilySpec, u: &RationalScalar, n_max: usize) -> Result<SeparationProfile> {
    let digits = IntegerDigits::new(f, u)?;
    let m = f.map_count() as u128;
    let base = digits.base as i64;
    let distinct: Vec<(i64, ())> = digits.grouped().into_iter().map(|(d, _)| (d, ())).collect();
    let dmin = distinct.first().unwrap().0;
    let dmax = distinct.last().unwrap().0;

    let mut profile = SeparationProfile {
        depths: vec![],
        delta_n: vec![],
        has_collision: vec![],
        rho_n: vec![],
    };
    let mut values: Vec<i64> = distinct.iter().map(|&(d, _)| d).collect();
    for n in 1..=n_max {
        if n > 1 {
            let (lo, hi) = (values[0], *values.last().unwrap());
            if !step_fits(lo, hi, base, dmin, dmax) {
                return Err(Error::BudgetExceeded {
                    depth: n,
                    feasible: n - 1,
                    reason: "lattice offsets overflow 64-bit integers".into(),
                });
            }
            let units = vec![(); values.len()];
            values = convolve_sorted(&values, &units, base, &distinct, |_, _| (), |_, _| ()).0;
            if values.len() as u64 > SEPARATION_BUDGET {
                return Err(Error::BudgetExceeded {
                    depth: n,
                    feasible: n - 1,
                    reason: format!("{} distinct values exceed the budget", values.len()),
                });
            }
        }
        let words = m.checked_pow(n as u32);
        let collision = words.is_none_or(|w| (values.len() as u128) < w);
        let gap = values.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(0);
        let denom = digits.lattice_denominator_big(n);
        let delta = RationalScalar::from_bigs(gap.into(), denom)?;
        profile.push(n, Param::Exact(delta), collision);
    }
    Ok(profile)
}

/// Float path: enumerate all `m^n` base points in double precision. Equal
/// floats are never reported as collisions.
fn separation_float(f: &FamilySpec, u: f64, n_max: usize) -> Result<SeparationProfile> {
    let base = f.require_base()?;
    f.check_param_f64(u)?;
    check_depth_budget(f.map_count(), n_max, SEPARATION_BUDGET)?;
    let t = f.translations_at_f64(u);
    let mut profile = SeparationProfile {
        depths: vec![],
        delta_n: vec![],
        has_collision: vec![],
        rho_n: vec![],
    };
    let mut values = t.clone();
    let mut scale = 1.0;
    for n in 1..=n_max {
        if n > 1 {
            scale /= base as f64;
            values = values
                .iter()
                .flat_map(|&v| t.iter().map(move |&d| v + scale * d))
                .collect();
        }
        let mut sorted = values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        let gap = sorted
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&g| g > 0.0)
            .fold(f64::INFINITY, f64::min);
        let gap = if gap.is_finite() { gap } else { 0.0 };
        profile.push(n, Param::Float(gap), false);
    }
    Ok(profile)
}

/// Rank over the rationals of the translation coefficient matrix; passing
/// (`rank == m`) certifies the Non-Degeneracy Condition for homogeneous
/// families with ratio below 1/2.
pub fn nondegeneracy_rank(f: &FamilySpec) -> Result<(usize, bool)> {
    let base = f.require_base()?;
    if base < 3 {
        return Err(Error::BaseTooSmall(base));
    }
    let rank = translation_rank(f);
    Ok((rank, rank == f.map_count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::AffineMapSpec;
    use crate::poly::ParamPoly;
    use crate::presets::{carpet_family, poly4_family, sandor_family};

    fn r(p: i64, q: i64) -> RationalScalar {
        RationalScalar::new(p, q)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn carpet_pointwise_overlaps() {
        let f = carpet_family();
        // words (0,1)(1,0) vs (1,0)(0,1): maps 2.4 vs 4.2
        assert!(exact_overlap_at(&f, &r(1, 1), &w("2.4"), &w("4.2")).unwrap());
        assert!(!exact_overlap_at(&f, &r(1, 3), &w("2.4"), &w("4.2")).unwrap());
        assert!(exact_overlap_at(&f, &r(11, 1), &w("2"), &w("4")).is_err());
    }

    #[test]
    fn sandor_overlaps() {
        let f = sandor_family(&r(1, 100)).unwrap();
        assert!(exact_overlap_at(&f, &r(34, 100), &w("1.3.2"), &w("2.1.3")).unwrap());
        assert!(exact_overlap_identically(&f, &w("1.3.2"), &w("2.1.3")).unwrap());
        assert!(!exact_overlap_identically(&f, &w("1.2.3"), &w("3.2.1")).unwrap());
        assert!(exact_overlap_identically(&f, &w("1.2.3"), &w("1.2.3")).unwrap());
    }

    #[test]
    fn search_depth_one() {
        let f = carpet_family();
        let found = overlap_search(&f, &r(1, 1), 1).unwrap();
        let pairs: Vec<String> = found
            .iter()
            .map(|x| format!("{} {}", x.word_i, x.word_j))
            .collect();
        assert_eq!(pairs, vec!["2 4", "3 6", "5 7"]);
        assert!(overlap_search(&f, &r(1, 3), 1).unwrap().is_empty());
        assert!(!overlap_search(&f, &r(0, 1), 1).unwrap().is_empty());
    }

    #[test]
    fn search_requires_homogeneous_and_budget() {
        let s = sandor_family(&r(1, 100)).unwrap();
        assert_eq!(
            overlap_search(&s, &r(34, 100), 2).unwrap_err(),
            Error::NotHomogeneous
        );
        let f = carpet_family();
        let err = overlap_search(&f, &r(1, 1), 9).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { feasible: 7, .. }));
    }

    #[test]
    fn witnesses_verify() {
        let f = carpet_family();
        for u in [r(1, 1), r(1, 2), r(2, 1), r(0, 1)] {
            for wit in overlap_search(&f, &u, 3).unwrap() {
                assert!(
                    exact_overlap_at(&f, &u, &wit.word_i, &wit.word_j).unwrap(),
                    "{wit}"
                );
                let (a, b) = (wit.word_i.symbols(), wit.word_j.symbols());
                assert_ne!(a[0], b[0]);
                assert_ne!(a.last(), b.last());
            }
        }
    }

    #[test]
    fn profile_examples() {
        let f = carpet_family();
        let p = separation_profile(&f, &Param::Exact(r(1, 3)), 1).unwrap();
        assert_eq!(p.delta_n[0], Param::Exact(r(1, 3)));
        assert!(!p.has_collision[0]);

        let p = separation_profile(&f, &Param::Exact(r(1, 1)), 1).unwrap();
        assert_eq!(p.delta_n[0], Param::Exact(r(1, 1)));
        assert!(p.has_collision[0]);
        assert_eq!(p.rho_n[0], 1.0);
    }

    #[test]
    fn float_profile_matches_exact_gaps() {
        let f = carpet_family();
        let exact = separation_profile(&f, &Param::Exact(r(1, 3)), 4).unwrap();
        let float = separation_profile(&f, &Param::Float(1.0 / 3.0), 4).unwrap();
        assert!(float.has_collision.iter().all(|c| !c));
        for (a, b) in exact.delta_n.iter().zip(&float.delta_n) {
            // float rounding can only split exact ties into tiny gaps or keep the gap
            assert!(b.to_f64() <= a.to_f64() + 1e-12);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(nondegeneracy_rank(&carpet_family()).unwrap(), (2, false));
        assert_eq!(nondegeneracy_rank(&poly4_family()).unwrap(), (4, true));

        let third = ParamPoly::from_ratios(&[(1, 3)]);
        let maps = vec![
            AffineMapSpec::new(third.clone(), ParamPoly::from_ratios(&[(0, 1), (2, 1)])),
            AffineMapSpec::new(third, ParamPoly::from_ratios(&[(0, 1), (3, 1)])),
        ];
        let f = FamilySpec::new(maps, (r(0, 1), r(1, 1)), vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(nondegeneracy_rank(&f).unwrap(), (1, false));

        let half = ParamPoly::from_ratios(&[(1, 2)]);
        let maps = vec![
            AffineMapSpec::new(half.clone(), ParamPoly::from_ratios(&[(1, 1)])),
            AffineMapSpec::new(half, ParamPoly::var()),
        ];
        let f = FamilySpec::new(maps, (r(0, 1), r(1, 1)), vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(nondegeneracy_rank(&f).unwrap_err(), Error::BaseTooSmall(2));
    }

    #[test]
    fn profile_lines() {
        let f = carpet_family();
        let p = separation_profile(&f, &Param::Exact(r(1, 1)), 2).unwrap();
        let text = p.to_lines();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("1\t1\ttrue\t"));
    }
}
