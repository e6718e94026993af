//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Curves are returned as flat `Float64Array`s; `NaN` marks values that are
//! not available (the exact ds formula beyond its supported depth).

use subdfo::experiments::sweep_grid;
use subdfo::formulas::{asymptotic_decrease, expected_decrease, parallel_per_work, per_evaluation};
use subdfo::mc::{estimate, Reduction};
use subdfo::{RngStream, Variant};
use wasm_bindgen::prelude::*;

fn variant(name: &str) -> Result<Variant, JsError> {
    name.parse::<Variant>().map_err(|e| JsError::new(&e.to_string()))
}

fn or_nan(r: subdfo::Result<subdfo::FormulaResult>) -> f64 {
    r.map_or(f64::NAN, |v| v.value)
}

/// For `p = 1..=p_max`: `[E, E^F, asymptotic]` per row, flattened.
#[wasm_bindgen]
pub fn decrease_curves(variant_name: &str, d: usize, p_max: usize) -> Result<Vec<f64>, JsError> {
    let v = variant(variant_name)?;
    if d == 0 {
        return Err(JsError::new("d must be positive"));
    }
    let mut out = Vec::with_capacity(3 * p_max.min(d));
    for p in 1..=p_max.min(d) {
        out.push(or_nan(expected_decrease(v, p, d)));
        out.push(or_nan(per_evaluation(v, p, d)));
        out.push(if p <= 2 { or_nan(asymptotic_decrease(p, d, v)) } else { f64::NAN });
    }
    Ok(out)
}

/// Monte Carlo estimate next to the exact value: `[mean, std_error, exact]`.
#[wasm_bindgen]
pub fn mc_estimate(variant_name: &str, p: usize, d: usize, n_sims: usize, seed: u64, full_basis: bool) -> Result<Vec<f64>, JsError> {
    let v = variant(variant_name)?;
    let reduction = if full_basis { Reduction::FullBasis } else { Reduction::Reduced };
    let e = estimate(v, p, d, n_sims, RngStream::new(seed), reduction).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(vec![e.mean, e.std_error, or_nan(expected_decrease(v, p, d))])
}

/// Per-work decrease on `c` cores over the sweep grid: `[p, value]` pairs.
/// ds points beyond the exact formula's depth are skipped.
#[wasm_bindgen]
pub fn parallel_curve(variant_name: &str, d: usize, cores: usize, p_multiples: usize) -> Result<Vec<f64>, JsError> {
    let v = variant(variant_name)?;
    if cores == 0 || d == 0 {
        return Err(JsError::new("d and cores must be positive"));
    }
    let mut out = Vec::new();
    for p in sweep_grid(v, d, cores, p_multiples) {
        if let Ok(w) = parallel_per_work(p, d, cores, v) {
            out.push(p as f64);
            out.push(w.value);
        }
    }
    Ok(out)
}
