//! Float-mode sampling of level-n measures into fixed-width bins.
//!
//! # Generator
//!
//! Sampling uses a lag-1 multiply-with-carry generator with 64-bit digits so
//! other implementations can reproduce runs bit for bit:
//!
//! ```text
//! A = 0xfeb3_4465_7c0a_f413
//! t = A * x + c            (128-bit)
//! x = t mod 2^64, c = t >> 64, output x
//! ```
//!
//! Seeding sets `x = seed`, `c = 1` and discards the first four outputs. A
//! uniform in `[0, 1)` is `(output >> 11) * 2^-53`; a symbol is the first index
//! whose cumulative weight exceeds the uniform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::FamilySpec;
use crate::measure::lattice::LatticeMeasure;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

const MWC_MULTIPLIER: u64 = 0xfeb3_4465_7c0a_f413;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mwc64 {
    x: u64,
    c: u64,
}

impl Mwc64 {
    pub fn new(seed: u64) -> Self {
        let mut rng = Mwc64 { x: seed, c: 1 };
        for _ in 0..4 {
            rng.next_u64();
        }
        rng
    }

    pub fn next_u64(&mut self) -> u64 {
        let t = MWC_MULTIPLIER as u128 * self.x as u128 + self.c as u128;
        self.x = t as u64;
        self.c = (t >> 64) as u64;
        self.x
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Uniform bins `[origin + k w, origin + (k+1) w)` for `k < bins`; points past
/// either end land in the first or last bin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Binning {
    pub origin: f64,
    pub width: f64,
    pub bins: u64,
}

impl Binning {
    /// `L^n` bins spanning the convex hull of the level-n base points at `u`:
    /// `[t_min s_n, t_max s_n]` with `s_n = (1 - L^-n) / (1 - 1/L)`.
    pub fn for_level(f: &FamilySpec, u: f64, n: usize) -> Result<Self> {
        let base = f.require_base()? as f64;
        let t = f.translations_at_f64(u);
        let t_min = t.iter().copied().fold(f64::INFINITY, f64::min);
        let t_max = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let bins = f
            .require_base()?
            .checked_pow(n as u32)
            .filter(|&b| b <= 1 << 52)
            .ok_or_else(|| Error::BudgetExceeded {
                depth: n,
                feasible: (52.0 / base.log2()).floor() as usize,
                reason: "bin count exceeds 2^52".into(),
            })?;
        let r = 1.0 / base;
        let s_n = (1.0 - r.powi(n as i32)) / (1.0 - r);
        let span = (t_max - t_min) * s_n;
        if span > 0.0 {
            Ok(Binning {
                origin: t_min * s_n,
                width: span / bins as f64,
                bins,
            })
        } else {
            Ok(Binning {
                origin: t_min * s_n,
                width: 1.0,
                bins: 1,
            })
        }
    }

    pub fn index(&self, x: f64) -> u64 {
        let k = ((x - self.origin) / self.width).floor();
        if k <= 0.0 {
            0
        } else {
            (k as u64).min(self.bins - 1)
        }
    }
}

/// Sparse binned measure. `samples` is the sample count behind a Monte-Carlo
/// estimate and 0 for a measure binned from exact masses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedMeasure {
    pub bin_width: f64,
    pub origin: f64,
    pub bins: u64,
    pub samples: u64,
    /// `(bin index, mass)`, ascending by index, zero bins omitted.
    pub masses: Vec<(u64, f64)>,
}

impl BinnedMeasure {
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().map(|&(_, m)| m).sum()
    }

    pub fn nonempty_bins(&self) -> usize {
        self.masses.len()
    }

    /// Plug-in entropy in nats, without bias correction.
    pub fn plugin_entropy(&self) -> f64 {
        self.masses
            .iter()
            .filter(|&&(_, p)| p > 0.0)
            .map(|&(_, p)| -p * p.ln())
            .sum()
    }

    /// Entropy in nats; Monte-Carlo estimates get the Miller–Madow correction
    /// `(K - 1) / (2 N)` for `K` nonempty bins and `N` samples.
    pub fn entropy_nats(&self) -> f64 {
        let h = self.plugin_entropy();
        if self.samples > 0 {
            h + (self.nonempty_bins() as f64 - 1.0) / (2.0 * self.samples as f64)
        } else {
            h
        }
    }
}

fn cumulative(f: &FamilySpec) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cum: Vec<f64> = f
        .weights_f64()
        .iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    *cum.last_mut().unwrap() = 1.0;
    cum
}

/// Draws `samples` i.i.d. words of length `n`, evaluates their base points in
/// double precision and bins them with [`Binning::for_level`].
pub fn monte_carlo_binned(
    f: &FamilySpec,
    u: f64,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<BinnedMeasure> {
    if n == 0 || samples == 0 {
        return Err(Error::Invalid("depth and samples must be positive".into()));
    }
    f.check_param_f64(u)?;
    let binning = Binning::for_level(f, u, n)?;
    let r = 1.0 / f.require_base()? as f64;
    let t = f.translations_at_f64(u);
    let cum = cumulative(f);
    let mut rng = Mwc64::new(seed);

    let mut indices: Vec<u64> = (0..samples)
        .map(|_| {
            let mut x = 0.0;
            let mut scale = 1.0;
            for _ in 0..n {
                let v = rng.next_f64();
                let s = cum.iter().position(|&c| v < c).unwrap_or(cum.len() - 1);
                x += scale * t[s];
                scale *= r;
            }
            binning.index(x)
        })
        .collect();
    indices.sort_unstable();

    let inv = 1.0 / samples as f64;
    let mut masses: Vec<(u64, f64)> = Vec::new();
    let mut k = 0;
    while k < indices.len() {
        let mut j = k + 1;
        while j < indices.len() && indices[j] == indices[k] {
            j += 1;
        }
        masses.push((indices[k], (j - k) as f64 * inv));
        k = j;
    }
    Ok(BinnedMeasure {
        bin_width: binning.width,
        origin: binning.origin,
        bins: binning.bins,
        samples,
        masses,
    })
}

/// Bins an exact measure with the same grid [`monte_carlo_binned`] uses at the
/// same depth and parameter.
pub fn bin_lattice_measure(meas: &LatticeMeasure, f: &FamilySpec, u: f64) -> Result<BinnedMeasure> {
    let binning = Binning::for_level(f, u, meas.level())?;
    let mut masses: Vec<(u64, f64)> = Vec::new();
    for k in 0..meas.len() {
        let idx = binning.index(meas.position_f64(k));
        let p = meas.mass_f64(k);
        match masses.last_mut() {
            Some((last, m)) if *last == idx => *m += p,
            _ => masses.push((idx, p)),
        }
    }
    Ok(BinnedMeasure {
        bin_width: binning.width,
        origin: binning.origin,
        bins: binning.bins,
        samples: 0,
        masses,
    })
}
