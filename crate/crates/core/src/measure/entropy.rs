//! Entropy-based dimension estimates `d_n = H_n / (n ln L)`.
//!
//! These are finite-depth estimates only. Nothing here bounds the distance
//! between `d_n` and the Hausdorff dimension of the limit measure; the useful
//! content is the trend in `n` and the comparison against the similarity
//! dimension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{similarity_dimension, FamilySpec};
use crate::measure::lattice::{LatticeMeasure, LevelMeasures};
use crate::measure::monte_carlo::BinnedMeasure;
use crate::rational::RationalScalar;

/// Anything with a well-defined discrete entropy.
pub trait EntropySource {
    fn entropy(&self) -> Result<f64>;
}

impl EntropySource for LatticeMeasure {
    fn entropy(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        Ok(self.entropy_nats())
    }
}

impl EntropySource for BinnedMeasure {
    fn entropy(&self) -> Result<f64> {
        if self.masses.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        Ok(self.entropy_nats())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEntry {
    pub depth: usize,
    pub entropy_nats: f64,
    pub ratio: f64,
}

pub fn entropy_dimension(meas: &impl EntropySource, base: u64, n: usize) -> Result<DimensionEntry> {
    if n == 0 || base < 2 {
        return Err(Error::Invalid("need n >= 1 and L >= 2".into()));
    }
    let h = meas.entropy()?;
    Ok(DimensionEntry {
        depth: n,
        entropy_nats: h,
        ratio: h / (n as f64 * (base as f64).ln()),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub depths: Vec<usize>,
    pub entropy_nats: Vec<f64>,
    pub ratio: Vec<f64>,
    /// Reference line: similarity dimension of the family at this parameter.
    pub similarity_dim: Option<f64>,
}

impl DimensionEstimate {
    pub fn push(&mut self, e: DimensionEntry) {
        self.depths.push(e.depth);
        self.entropy_nats.push(e.entropy_nats);
        self.ratio.push(e.ratio);
    }

    pub fn ratio_at(&self, depth: usize) -> Option<f64> {
        self.depths
            .iter()
            .position(|&d| d == depth)
            .map(|k| self.ratio[k])
    }

    pub fn entropy_at(&self, depth: usize) -> Option<f64> {
        self.depths
            .iter()
            .position(|&d| d == depth)
            .map(|k| self.entropy_nats[k])
    }
}

/// Exact entropy ratios at the requested depths, sharing one level sweep.
/// On a budget error the estimate computed so far is returned with the error.
pub fn dimension_profile_partial(
    f: &FamilySpec,
    u: &RationalScalar,
    depths: &[usize],
) -> (DimensionEstimate, Option<Error>) {
    let mut est = DimensionEstimate {
        similarity_dim: similarity_dimension(f, u).ok(),
        ..Default::default()
    };
    let mut wanted: Vec<usize> = depths.iter().copied().filter(|&d| d > 0).collect();
    wanted.sort_unstable();
    wanted.dedup();
    let Some(&max) = wanted.last() else {
        return (est, None);
    };
    let mut levels = match LevelMeasures::new(f, u) {
        Ok(l) => l,
        Err(e) => return (est, Some(e)),
    };
    for n in 1..=max {
        let level = match levels.advance() {
            Ok(l) => l,
            Err(e) => return (est, Some(e)),
        };
        if wanted.binary_search(&n).is_ok() {
            match entropy_dimension(level, level.base(), n) {
                Ok(e) => est.push(e),
                Err(e) => return (est, Some(e)),
            }
        }
    }
    (est, None)
}

pub fn dimension_profile(
    f: &FamilySpec,
    u: &RationalScalar,
    depths: &[usize],
) -> Result<DimensionEstimate> {
    match dimension_profile_partial(f, u, depths) {
        (est, None) => Ok(est),
        (_, Some(e)) => Err(e),
    }
}
