//! Browser bindings for the carpet-projection demo. Every export returns a JSON
//! string: the payload on success, `{"error": "..."}` otherwise.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use selfsim_core::measure::{
    dimension_profile_partial, entropy_dimension, exact_level_measure, monte_carlo_binned,
    DimensionEstimate,
};
use selfsim_core::{
    carpet_family, overlap_search, separation_profile, FamilySpec, Param, RationalScalar,
};

const MAX_BARS: usize = 2000;

#[derive(Debug, Serialize)]
pub struct Histogram {
    pub slope: String,
    pub depth: usize,
    pub lo: f64,
    pub hi: f64,
    pub masses: Vec<f64>,
    pub atoms: usize,
    pub entropy_nats: f64,
    pub d_n: f64,
}

fn slope(f: &FamilySpec, p: i64, q: i64) -> Result<RationalScalar, String> {
    if q <= 0 {
        return Err("denominator must be positive".into());
    }
    let u = RationalScalar::new(p, q);
    f.check_param(&u).map_err(|e| e.to_string())?;
    Ok(u)
}

/// Level-`depth` carpet measure at slope `p/q`, summed into `bars` equal bins
/// over its support hull.
pub fn histogram(p: i64, q: i64, depth: usize, bars: usize) -> Result<Histogram, String> {
    let f = carpet_family();
    let u = slope(&f, p, q)?;
    if depth == 0 || bars == 0 || bars > MAX_BARS {
        return Err(format!("need depth >= 1 and 1 <= bars <= {MAX_BARS}"));
    }
    let m = exact_level_measure(&f, &u, depth).map_err(|e| e.to_string())?;
    let e = entropy_dimension(&m, 3, depth).map_err(|e| e.to_string())?;
    let lo = m.position_f64(0);
    let hi = m.position_f64(m.len() - 1);
    let width = if hi > lo {
        (hi - lo) / bars as f64
    } else {
        1.0
    };
    let mut masses = vec![0.0; bars];
    for k in 0..m.len() {
        let b = (((m.position_f64(k) - lo) / width) as usize).min(bars - 1);
        masses[b] += m.mass_f64(k);
    }
    Ok(Histogram {
        slope: u.to_string(),
        depth,
        lo,
        hi,
        masses,
        atoms: m.len(),
        entropy_nats: e.entropy_nats,
        d_n: e.ratio,
    })
}

/// Exact `d_1..d_depth` at slope `p/q`; stops early at the atom budget.
pub fn exact_profile(p: i64, q: i64, depth: usize) -> Result<DimensionEstimate, String> {
    let f = carpet_family();
    let u = slope(&f, p, q)?;
    let depths: Vec<usize> = (1..=depth).collect();
    let (est, _) = dimension_profile_partial(&f, &u, &depths);
    Ok(est)
}

/// Monte-Carlo `d_1..d_depth` at a float slope.
pub fn sampled_profile(
    x: f64,
    depth: usize,
    samples: u64,
    seed: u64,
) -> Result<DimensionEstimate, String> {
    let f = carpet_family();
    f.check_param_f64(x).map_err(|e| e.to_string())?;
    let mut est = DimensionEstimate::default();
    for n in 1..=depth {
        let b = monte_carlo_binned(&f, x, n, samples, seed).map_err(|e| e.to_string())?;
        est.push(entropy_dimension(&b, 3, n).map_err(|e| e.to_string())?);
    }
    Ok(est)
}

/// Overlap witnesses and separation data at slope `p/q`.
pub fn overlaps(p: i64, q: i64, depth: usize) -> Result<serde_json::Value, String> {
    let f = carpet_family();
    let u = slope(&f, p, q)?;
    let witnesses = overlap_search(&f, &u, depth).map_err(|e| e.to_string())?;
    let sep = separation_profile(&f, &Param::Exact(u.clone()), depth).map_err(|e| e.to_string())?;
    Ok(json!({
        "slope": u.to_string(),
        "witnesses": witnesses.iter().map(|w| [w.word_i.to_string(), w.word_j.to_string()]).collect::<Vec<_>>(),
        "separation": sep,
    }))
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v)
            .unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[wasm_bindgen(js_name = histogram)]
pub fn histogram_js(p: i32, q: i32, depth: u32, bars: u32) -> String {
    to_json(histogram(p as i64, q as i64, depth as usize, bars as usize))
}

#[wasm_bindgen(js_name = exactProfile)]
pub fn exact_profile_js(p: i32, q: i32, depth: u32) -> String {
    to_json(exact_profile(p as i64, q as i64, depth as usize))
}

#[wasm_bindgen(js_name = sampledProfile)]
pub fn sampled_profile_js(x: f64, depth: u32, samples: u32, seed: u32) -> String {
    to_json(sampled_profile(
        x,
        depth as usize,
        samples as u64,
        seed as u64,
    ))
}

#[wasm_bindgen(js_name = overlaps)]
pub fn overlaps_js(p: i32, q: i32, depth: u32) -> String {
    to_json(overlaps(p as i64, q as i64, depth as usize))
}
