//! Integrals of piecewise-linear test functions against lattice measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::FamilySpec;
use crate::measure::lattice::{exact_level_measure, LatticeMeasure};
use crate::rational::RationalScalar;

/// Linear interpolation through `knots` (ascending in x), constant beyond the ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Invalid(
                "piecewise-linear function needs a knot".into(),
            ));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0)
            || knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite())
        {
            return Err(Error::Invalid(
                "knots must be finite and strictly increasing in x".into(),
            ));
        }
        Ok(PiecewiseLinear { knots })
    }

    pub fn constant(c: f64) -> Self {
        PiecewiseLinear {
            knots: vec![(0.0, c)],
        }
    }

    /// Tent of height `peak` on `[center - half_width, center + half_width]`.
    pub fn hat(center: f64, half_width: f64, peak: f64) -> Result<Self> {
        Self::new(vec![
            (center - half_width, 0.0),
            (center, peak),
            (center + half_width, 0.0),
        ])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        if x >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        let j = k.partition_point(|p| p.0 <= x);
        let (x0, y0) = k[j - 1];
        let (x1, y1) = k[j];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Largest absolute slope.
    pub fn lipschitz(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max)
    }
}

/// `Σ mass(a) fn(position(a))`.
pub fn integrate_test_function(meas: &LatticeMeasure, func: &PiecewiseLinear) -> f64 {
    (0..meas.len())
        .map(|k| meas.mass_f64(k) * func.eval(meas.position_f64(k)))
        .sum()
}

/// `Φ_f(u)` at depth `n` over a grid of rational parameters.
pub fn phi_probe(
    f: &FamilySpec,
    grid: &[RationalScalar],
    n: usize,
    func: &PiecewiseLinear,
) -> Result<Vec<f64>> {
    grid.iter()
        .map(|u| {
            Ok(integrate_test_function(
                &exact_level_measure(f, u, n)?,
                func,
            ))
        })
        .collect()
}

/// Allowed `|Φ_f(u) - Φ_f(u')|` at depth `n`:
/// `K sup|t'| L/(L-1) |u - u'| + 2 K xi L^-n`.
pub fn phi_lipschitz_bound(
    f: &FamilySpec,
    func: &PiecewiseLinear,
    n: usize,
    du: f64,
) -> Result<f64> {
    let base = f.require_base()? as f64;
    let k = func.lipschitz();
    let slope = f.translation_slope_bound().to_f64();
    let xi = f.support_radius()?.to_f64();
    Ok(k * slope * base / (base - 1.0) * du.abs() + 2.0 * k * xi * base.powi(-(n as i32)))
}
