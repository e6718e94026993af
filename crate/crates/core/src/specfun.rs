//! Gamma-function kernels used by the decrease formulas.
//!
//! `ln Γ` uses the Stirling series with Bernoulli terms through `B_16`,
//! applied at `x >= 15` after shifting smaller arguments up with the
//! recurrence `Γ(x+1) = x Γ(x)`. Truncation error at the shift point is
//! below `1e-19`, so the result is limited by rounding only.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const STIRLING_MIN: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k-1))` for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Tail `sum_k c_k / x^{2k-1}` of the Stirling series.
fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING_COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x >= STIRLING_MIN {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_unchecked(shifted) - prod.ln()
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires a finite x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

/// `ln Γ(y) - ln Γ(y + 1/2)` for `y > 0`, without cancellation for large `y`.
fn log_gamma_half_step(y: f64) -> f64 {
    if y < STIRLING_MIN {
        return ln_gamma_unchecked(y) - ln_gamma_unchecked(y + 0.5);
    }
    // Expand both Stirling series and cancel the leading x ln x terms analytically.
    -0.5 * y.ln() - y * (0.5 / y).ln_1p() + 0.5 + stirling_tail(y) - stirling_tail(y + 0.5)
}

/// `Γ(d/2) / Γ(d/2 + 1/2)`, the dimension factor shared by all decrease formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRatio {
    pub d: usize,
    pub value: f64,
}

pub fn gamma_half_ratio(d: usize) -> Result<GammaRatio> {
    if d == 0 {
        return Err(Error::InvalidDimension { p: 1, d });
    }
    let value = log_gamma_half_step(d as f64 / 2.0).exp();
    Ok(GammaRatio { d, value })
}

/// `∫_0^{π/2} sin^m θ dθ = (√π/2) Γ(m/2 + 1/2) / Γ(m/2 + 1)`.
pub fn sin_power_integral(m: u32) -> f64 {
    0.5 * PI.sqrt() * log_gamma_half_step(m as f64 / 2.0 + 0.5).exp()
}

/// Kershaw's bracket `(x + s/2)^{1-s} < Γ(x+1)/Γ(x+s) < (x - 1/2 + (s + 1/4)^{1/2})^{1-s}`.
pub fn kershaw_bounds(x: f64, s: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() || !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("kershaw_bounds needs x > 0 and 0 < s < 1, got x = {x}, s = {s}")));
    }
    let lower = (x + s / 2.0).powf(1.0 - s);
    let upper = (x - 0.5 + (s + 0.25).sqrt()).powf(1.0 - s);
    Ok((lower, upper))
}

/// Gautschi's bracket for `Γ(d/2)/Γ(d/2 + 1/2)`: `(√2/√d, √2 √(d+2) / d)`.
pub fn gautschi_bounds(d: usize) -> (f64, f64) {
    let d = d as f64;
    (2f64.sqrt() / d.sqrt(), 2f64.sqrt() * (d + 2.0).sqrt() / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial(n: u32) -> f64 {
        (1..=n).map(|k| (k as f64).ln()).sum()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn log_gamma_lattice() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-13);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-13);
        assert!(close(log_gamma(0.5).unwrap(), 0.5 * PI.ln(), 1e-12));
        assert!((log_gamma(0.5).unwrap() - 0.572_364_942_9).abs() < 1e-10);
        assert!((log_gamma(6.0).unwrap() - 4.787_491_742_8).abs() < 1e-10);
        assert!(close(log_gamma(6.0).unwrap(), 120f64.ln(), 1e-12));
        for n in 1..=170u32 {
            assert!(close(log_gamma(n as f64 + 1.0).unwrap(), ln_factorial(n), 1e-12), "n = {n}");
        }
    }

    #[test]
    fn log_gamma_half_integers() {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        for n in 0..=150u32 {
            let expect = ln_factorial(2 * n) + 0.5 * PI.ln() - (n as f64) * 4f64.ln() - ln_factorial(n);
            assert!(close(log_gamma(n as f64 + 0.5).unwrap(), expect, 1e-12), "n = {n}");
        }
    }

    #[test]
    fn log_gamma_large_argument() {
        // ln Γ(x+1) - ln Γ(x) = ln x holds at any scale
        for &x in &[1e3, 1e4, 1e5, 1e6] {
            let diff = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
            assert!((diff - f64::ln(x)).abs() < 1e-12 * log_gamma(x).unwrap());
        }
    }

    #[test]
    fn log_gamma_domain() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn gamma_half_ratio_closed_forms() {
        let sp = PI.sqrt();
        assert!(close(gamma_half_ratio(1).unwrap().value, sp, 1e-13));
        assert!(close(gamma_half_ratio(2).unwrap().value, 2.0 / sp, 1e-13));
        assert!(close(gamma_half_ratio(4).unwrap().value, 4.0 / (3.0 * sp), 1e-13));
        assert!(gamma_half_ratio(0).is_err());
    }

    #[test]
    fn gamma_half_ratio_recurrence_across_the_stirling_switch() {
        // R(d+2) = R(d) · (d/2) / (d/2 + 1/2)
        for d in 1..200usize {
            let a = gamma_half_ratio(d).unwrap().value;
            let b = gamma_half_ratio(d + 2).unwrap().value;
            let x = d as f64 / 2.0;
            assert!(close(b, a * x / (x + 0.5), 1e-13), "d = {d}");
        }
    }

    #[test]
    fn gamma_half_ratio_asymptotics() {
        let v = gamma_half_ratio(1_000_000).unwrap().value;
        assert!((v * 1000.0 - 2f64.sqrt()).abs() < 1e-5);
        let huge = gamma_half_ratio(1_000_000_000).unwrap().value;
        assert!(huge.is_finite() && huge > 0.0);
        assert!((huge * 1e9f64.sqrt() - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn gautschi_sandwich() {
        for d in 1..=10_000usize {
            let v = gamma_half_ratio(d).unwrap().value;
            let (lo, hi) = gautschi_bounds(d);
            assert!(lo < v && v < hi, "d = {d}: {lo} < {v} < {hi}");
        }
    }

    #[test]
    fn sin_power_small_orders() {
        assert!(close(sin_power_integral(0), PI / 2.0, 1e-14));
        assert!(close(sin_power_integral(1), 1.0, 1e-14));
        assert!(close(sin_power_integral(2), PI / 4.0, 1e-14));
        assert!(close(sin_power_integral(3), 2.0 / 3.0, 1e-14));
    }

    #[test]
    fn wallis_pairing() {
        for m in 1..=2000u32 {
            let lhs = sin_power_integral(m) * sin_power_integral(m - 1);
            let rhs = PI / (2.0 * m as f64);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs, "m = {m}");
        }
    }

    #[test]
    fn kershaw_brackets_gamma_ratio() {
        for &(x, s) in &[(1.0, 0.5), (10.0, 0.5), (0.5, 0.5), (3.7, 0.2), (250.0, 0.9)] {
            let (lo, hi) = kershaw_bounds(x, s).unwrap();
            let r = (log_gamma(x + 1.0).unwrap() - log_gamma(x + s).unwrap()).exp();
            assert!(lo < r && r < hi, "x={x} s={s}: {lo} < {r} < {hi}");
        }
        let (lo, _) = kershaw_bounds(1.0, 0.5).unwrap();
        assert!((lo - 1.25f64.sqrt()).abs() < 1e-15);
        assert!(kershaw_bounds(1.0, 1.0).is_err());
        assert!(kershaw_bounds(0.0, 0.5).is_err());
    }
}
