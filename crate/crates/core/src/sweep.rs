//! Parameter enumeration and batch analysis across a family.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::class::{validate_rational_class, ClassReport};
use crate::error::{Error, Result};
use crate::format::load_family;
use crate::ifs::{similarity_dimension, similarity_dimension_f64, FamilySpec};
use crate::measure::{
    entropy_dimension, integrate_test_function, monte_carlo_binned, DimensionEstimate,
    LevelMeasures, PiecewiseLinear,
};
use crate::overlap::{overlap_search, separation_profile, OverlapWitness, SeparationProfile};
use crate::param::Param;
use crate::rational::RationalScalar;

/// All reduced `p/q` with `q <= q_max` in `[lo, hi]`, ascending, from an in-order
/// Stern–Brocot walk between consecutive integers.
pub fn farey_slopes(
    interval: (&RationalScalar, &RationalScalar),
    q_max: u64,
) -> Result<Vec<RationalScalar>> {
    let (lo, hi) = interval;
    if lo > hi {
        return Err(Error::EmptyInterval);
    }
    if q_max == 0 {
        return Err(Error::Invalid("q_max must be at least 1".into()));
    }
    let q_max = BigInt::from(q_max);
    let frac = |p: &BigInt, q: &BigInt| RationalScalar::from_bigs(p.clone(), q.clone()).unwrap();
    let mut out = Vec::new();
    let mut k = lo.floor();
    let last = hi.floor();
    while k <= last {
        let left = (k.clone(), BigInt::one());
        let right = (&k + 1, BigInt::one());
        let left_val = frac(&left.0, &left.1);
        if &left_val >= lo && &left_val <= hi {
            out.push(left_val);
        }
        // in-order walk of mediants strictly between k and k + 1
        let mut stack = vec![(left, right, false)];
        while let Some((l, r, expanded)) = stack.pop() {
            let q = &l.1 + &r.1;
            if q > q_max {
                continue;
            }
            let p = &l.0 + &r.0;
            let value = frac(&p, &q);
            if expanded {
                if &value >= lo && &value <= hi {
                    out.push(value);
                }
                continue;
            }
            let l_val = frac(&l.0, &l.1);
            let r_val = frac(&r.0, &r.1);
            if &r_val <= lo || &l_val >= hi {
                continue;
            }
            let mid = (p, q);
            stack.push((mid.clone(), r.clone(), false));
            stack.push((l.clone(), r, true));
            stack.push((l, mid, false));
        }
        k += 1;
    }
    Ok(out)
}

/// Brute-force enumeration used to cross-check [`farey_slopes`].
pub fn farey_slopes_brute(
    interval: (&RationalScalar, &RationalScalar),
    q_max: u64,
) -> Vec<RationalScalar> {
    let (lo, hi) = interval;
    let mut out = BTreeSet::new();
    for q in 1..=q_max as i64 {
        let qb = RationalScalar::integer(q);
        let p_lo = (lo * &qb).ceil().to_i64().unwrap();
        let p_hi = (hi * &qb).floor().to_i64().unwrap();
        for p in p_lo..=p_hi {
            if p.gcd(&q) == 1 {
                out.insert(RationalScalar::new(p, q));
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    SimilarityDim,
    Separation,
    Overlaps,
    Entropy,
    PhiProbe,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::SimilarityDim,
        Metric::Separation,
        Metric::Overlaps,
        Metric::Entropy,
        Metric::PhiProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SimilarityDim => "similarity_dim",
            Metric::Separation => "separation",
            Metric::Overlaps => "overlaps",
            Metric::Entropy => "entropy",
            Metric::PhiProbe => "phi_probe",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown metric {s:?}")))
    }
}

pub fn parse_metrics(list: &str) -> Result<BTreeSet<Metric>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Hat function used by the `phi_probe` metric unless the plan overrides it.
pub const DEFAULT_PHI_HAT: (f64, f64) = (3.0, 1.5);

#[derive(Clone, Debug)]
pub struct SweepPlan {
    pub family: FamilySpec,
    /// Denominator bound for rational slopes; `None` disables the rational lane.
    pub rational_slopes: Option<u64>,
    /// Number of uniformly spaced float parameters (cell midpoints).
    pub float_grid: usize,
    pub depths: Vec<usize>,
    pub metrics: BTreeSet<Metric>,
    pub parallelism: usize,
    pub seed: u64,
    pub samples: u64,
    pub overlap_depth: usize,
    pub phi_hat: (f64, f64),
    pub timeout: Duration,
}

impl SweepPlan {
    pub fn new(family: FamilySpec) -> Self {
        SweepPlan {
            family,
            rational_slopes: None,
            float_grid: 0,
            depths: vec![1, 2, 4, 8],
            metrics: Metric::ALL.into_iter().collect(),
            parallelism: 1,
            seed: crate::measure::monte_carlo::DEFAULT_SEED,
            samples: crate::measure::monte_carlo::DEFAULT_SAMPLES,
            overlap_depth: 3,
            phi_hat: DEFAULT_PHI_HAT,
            timeout: Duration::from_secs(300),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rational_slopes.is_none() && self.float_grid == 0 {
            return Err(Error::Invalid("plan has no parameter source".into()));
        }
        if self.depths.is_empty() || self.depths.contains(&0) {
            return Err(Error::Invalid(
                "depths must be a nonempty list of positive integers".into(),
            ));
        }
        if self.parallelism == 0 {
            return Err(Error::Invalid("parallelism must be at least 1".into()));
        }
        Ok(())
    }

    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(1)
    }

    /// Rational lane followed by float lane, merged ascending by value.
    pub fn parameters(&self) -> Result<Vec<Param>> {
        let (lo, hi) = self.family.interval();
        let mut params: Vec<Param> = match self.rational_slopes {
            Some(q) => farey_slopes((lo, hi), q)?
                .into_iter()
                .map(Param::Exact)
                .collect(),
            None => vec![],
        };
        let (a, b) = (lo.to_f64(), hi.to_f64());
        let n = self.float_grid;
        params.extend((0..n).map(|k| Param::Float(a + (b - a) * (k as f64 + 0.5) / n as f64)));
        params.sort_by(|x, y| {
            x.to_f64()
                .total_cmp(&y.to_f64())
                .then_with(|| y.is_exact().cmp(&x.is_exact()))
        });
        Ok(params)
    }
}

/// Plan file contents; `family` is a preset name or a family file path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub family: String,
    #[serde(default)]
    pub qmax: Option<u64>,
    #[serde(default)]
    pub grid: usize,
    #[serde(default)]
    pub depths: Option<Vec<usize>>,
    #[serde(default)]
    pub metrics: Option<Vec<Metric>>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub overlap_depth: Option<usize>,
    #[serde(default)]
    pub timeout_secs: Option<u64>,
}

impl PlanFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn into_plan(self) -> Result<SweepPlan> {
        let mut plan = SweepPlan::new(load_family(&self.family)?);
        plan.rational_slopes = self.qmax;
        plan.float_grid = self.grid;
        if let Some(d) = self.depths {
            plan.depths = d;
        }
        if let Some(m) = self.metrics {
            plan.metrics = m.into_iter().collect();
        }
        if let Some(j) = self.jobs {
            plan.parallelism = j;
        }
        if let Some(s) = self.seed {
            plan.seed = s;
        }
        if let Some(s) = self.samples {
            plan.samples = s;
        }
        if let Some(d) = self.overlap_depth {
            plan.overlap_depth = d;
        }
        if let Some(t) = self.timeout_secs {
            plan.timeout = Duration::from_secs(t);
        }
        plan.validate()?;
        Ok(plan)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub parameter: Param,
    pub similarity_dim: Option<f64>,
    pub class_report: Option<ClassReport>,
    pub separation: Option<SeparationProfile>,
    pub witnesses: Option<Vec<OverlapWitness>>,
    pub dimension: Option<DimensionEstimate>,
    pub phi_values: Option<Vec<f64>>,
    /// Set when a budget or the per-parameter timeout cut the record short.
    pub budget: bool,
    pub errors: Vec<String>,
}

impl SweepRecord {
    fn empty(parameter: Param) -> Self {
        SweepRecord {
            parameter,
            similarity_dim: None,
            class_report: None,
            separation: None,
            witnesses: None,
            dimension: None,
            phi_values: None,
            budget: false,
            errors: vec![],
        }
    }

    fn fail(&mut self, metric: Metric, e: Error) {
        if matches!(e, Error::BudgetExceeded { .. }) {
            self.budget = true;
        }
        self.errors.push(format!("{metric}: {e}"));
    }
}

struct Deadline(Instant);

impl Deadline {
    fn check(&self, depth: usize) -> Result<()> {
        if Instant::now() > self.0 {
            Err(Error::BudgetExceeded {
                depth,
                feasible: depth.saturating_sub(1),
                reason: "per-parameter timeout".into(),
            })
        } else {
            Ok(())
        }
    }
}

fn exact_entropy_and_phi(
    f: &FamilySpec,
    u: &RationalScalar,
    depths: &[usize],
    hat: Option<&PiecewiseLinear>,
    deadline: &Deadline,
    dim: &mut DimensionEstimate,
    phi: &mut Vec<f64>,
) -> Result<()> {
    let max = depths.iter().copied().max().unwrap_or(0);
    let mut levels = LevelMeasures::new(f, u)?;
    for n in 1..=max {
        deadline.check(n)?;
        let level = levels.advance()?;
        if depths.contains(&n) {
            dim.push(entropy_dimension(level, level.base(), n)?);
            if let Some(h) = hat {
                phi.push(integrate_test_function(level, h));
            }
        }
    }
    Ok(())
}

fn analyze_parameter(plan: &SweepPlan, param: Param) -> SweepRecord {
    let f = &plan.family;
    let deadline = Deadline(Instant::now() + plan.timeout);
    let mut rec = SweepRecord::empty(param.clone());
    let mut depths = plan.depths.clone();
    depths.sort_unstable();
    depths.dedup();
    let max_depth = plan.max_depth();

    for &metric in &plan.metrics {
        if let Err(e) = deadline.check(0) {
            rec.fail(metric, e);
            break;
        }
        match metric {
            Metric::SimilarityDim => {
                let s = match &param {
                    Param::Exact(u) => similarity_dimension(f, u),
                    Param::Float(x) => similarity_dimension_f64(f, *x),
                };
                match s {
                    Ok(s) => rec.similarity_dim = Some(s),
                    Err(e) => rec.fail(metric, e),
                }
                rec.class_report = Some(validate_rational_class(f));
            }
            Metric::Separation => match separation_profile(f, &param, max_depth) {
                Ok(p) => rec.separation = Some(p),
                Err(e) => rec.fail(metric, e),
            },
            Metric::Overlaps => {
                if let Param::Exact(u) = &param {
                    match overlap_search(f, u, plan.overlap_depth) {
                        Ok(w) => rec.witnesses = Some(w),
                        Err(e) => rec.fail(metric, e),
                    }
                }
            }
            Metric::Entropy => match &param {
                Param::Exact(u) => {
                    let mut dim = DimensionEstimate {
                        similarity_dim: similarity_dimension(f, u).ok(),
                        ..Default::default()
                    };
                    let mut phi = vec![];
                    let res =
                        exact_entropy_and_phi(f, u, &depths, None, &deadline, &mut dim, &mut phi);
                    rec.dimension = Some(dim);
                    if let Err(e) = res {
                        rec.fail(metric, e);
                    }
                }
                Param::Float(x) => {
                    let mut dim = DimensionEstimate {
                        similarity_dim: similarity_dimension_f64(f, *x).ok(),
                        ..Default::default()
                    };
                    let res = (|| -> Result<()> {
                        let base = f.require_base()?;
                        for &n in &depths {
                            deadline.check(n)?;
                            let b = monte_carlo_binned(f, *x, n, plan.samples, plan.seed)?;
                            dim.push(entropy_dimension(&b, base, n)?);
                        }
                        Ok(())
                    })();
                    rec.dimension = Some(dim);
                    if let Err(e) = res {
                        rec.fail(metric, e);
                    }
                }
            },
            Metric::PhiProbe => {
                if let Param::Exact(u) = &param {
                    let hat = PiecewiseLinear::hat(plan.phi_hat.0, plan.phi_hat.1, 1.0);
                    let mut phi = vec![];
                    let mut scratch = DimensionEstimate::default();
                    let res = hat.and_then(|h| {
                        exact_entropy_and_phi(
                            f,
                            u,
                            &depths,
                            Some(&h),
                            &deadline,
                            &mut scratch,
                            &mut phi,
                        )
                    });
                    rec.phi_values = Some(phi);
                    if let Err(e) = res {
                        rec.fail(metric, e);
                    }
                }
            }
        }
    }
    rec
}

/// Runs every requested metric at every plan parameter. Work is split
/// parameter-wise over `plan.parallelism` workers; the output order is the
/// parameter order regardless of worker count. Failures stay inside records.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRecord>> {
    plan.validate()?;
    let params = plan.parameters()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.parallelism)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(pool.install(|| {
        params
            .into_par_iter()
            .map(|p| analyze_parameter(plan, p))
            .collect()
    }))
}

/// Single-parameter analysis with all requested metrics.
pub fn analyze(plan: &SweepPlan, param: Param) -> SweepRecord {
    analyze_parameter(plan, param)
}
