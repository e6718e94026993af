//! Exact, quadrature and asymptotic expected-decrease values.
//!
//! All values are for one iteration on a unit-norm linear objective with a
//! unit step, averaged over a uniformly random gradient and subspace.
//! Direct search (`ds`) achieves `‖Bᵀg‖∞`, the model-based step (`mb`)
//! achieves `‖Bᵀg‖₂`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::specfun::{gamma_half_ratio, log_gamma};

/// Largest subspace dimension served by the nested quadrature for `I(p)`.
pub const P_MAX: usize = 8;

/// Tolerance used for the cached `I(p)` values behind [`expected_decrease_ds`].
pub const DEFAULT_I_TOL: f64 = 1e-12;

/// Absolute error attached to closed-form results.
pub const CLOSED_FORM_ERROR: f64 = 1e-12;

/// Upper bound on integrand evaluations for one quadrature pass.
const QUADRATURE_BUDGET: usize = 60_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Ds,
    Mb,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Ds => "ds",
            Variant::Mb => "mb",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ds" => Ok(Variant::Ds),
            "mb" => Ok(Variant::Mb),
            other => Err(Error::Unsupported(format!("unknown variant '{other}' (expected ds or mb)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Asymptotic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::Quadrature => "quadrature",
            Method::Asymptotic => "asymptotic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormulaResult {
    pub value: f64,
    pub method: Method,
    pub p: usize,
    pub d: usize,
    pub estimated_abs_error: f64,
}

impl FormulaResult {
    fn closed(value: f64, p: usize, d: usize) -> Self {
        Self { value, method: Method::ClosedForm, p, d, estimated_abs_error: CLOSED_FORM_ERROR }
    }

    fn scaled(self, factor: f64) -> Self {
        Self { value: self.value * factor, estimated_abs_error: self.estimated_abs_error * factor.abs(), ..self }
    }
}

/// The nested trigonometric integral `I(p)` with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpValue {
    pub p: usize,
    pub value: f64,
    pub abs_error: f64,
}

/// `∫_{arctan c}^{π/2} sin^k φ dφ` by the reduction formula.
fn sin_power_tail(k: usize, c: f64) -> f64 {
    let h = c.hypot(1.0);
    let (s, co) = (c / h, 1.0 / h);
    let (mut acc, start) = if k.is_multiple_of(2) { (FRAC_PI_2 - c.atan(), 2) } else { (co, 3) };
    let mut s_pow = if k.is_multiple_of(2) { s } else { s * s };
    let mut j = start;
    while j <= k {
        let jf = j as f64;
        acc = s_pow * co / jf + (jf - 1.0) / jf * acc;
        s_pow *= s * s;
        j += 2;
    }
    acc
}

/// Value of the integral over angles `level..p-1` given the running
/// cosecant product `c` of the outer angles.
fn nested_level(level: usize, p: usize, c: f64, rule: &GaussLegendre) -> f64 {
    if level == p - 1 {
        return sin_power_tail(p - 1, c);
    }
    rule.mapped(c.atan(), FRAC_PI_2)
        .map(|(phi, w)| {
            let s = phi.sin();
            w * s.powi(level as i32) * nested_level(level + 1, p, c / s, rule)
        })
        .sum()
}

fn integral_i_with_rule(p: usize, rule: &GaussLegendre) -> f64 {
    match p {
        1 => 1.0,
        _ => nested_level(1, p, 1.0, rule),
    }
}

/// Evaluates `I(p)` over the region where `φ₁ ∈ [π/4, π/2]` and each later
/// angle is bounded below by `arctan` of the cosecant product of the
/// earlier ones.
///
/// The innermost angle is integrated in closed form. Outer angles use a
/// tensor Gauss–Legendre rule whose order is raised until two successive
/// orders agree to `tol`; the integrand is analytic on the region, so the
/// error decays geometrically with the order.
pub fn integral_i(p: usize, tol: f64) -> Result<IpValue> {
    if p == 0 {
        return Err(Error::InvalidDimension { p, d: p });
    }
    if p > P_MAX {
        return Err(Error::UnsupportedDepth { p, max: P_MAX });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if p <= 2 {
        let value = integral_i_with_rule(p, &GaussLegendre::new(1));
        return Ok(IpValue { p, value, abs_error: 0.0 });
    }
    let depth = (p - 2) as u32;
    let mut previous: Option<f64> = None;
    let mut last_err = f64::INFINITY;
    for n in [6usize, 9, 13, 19, 27, 38, 54, 76, 108] {
        if n.checked_pow(depth).is_none_or(|cost| cost > QUADRATURE_BUDGET) {
            break;
        }
        let value = integral_i_with_rule(p, &GaussLegendre::new(n));
        if let Some(prev) = previous {
            last_err = (value - prev).abs();
            if last_err <= tol {
                return Ok(IpValue { p, value, abs_error: last_err });
            }
        }
        previous = Some(value);
    }
    Err(Error::NoConvergence { tol, estimate: last_err })
}

fn cached_integral_i(p: usize) -> Result<IpValue> {
    static CACHE: [OnceLock<Result<IpValue>>; P_MAX + 1] = [const { OnceLock::new() }; P_MAX + 1];
    if p == 0 || p > P_MAX {
        return integral_i(p, DEFAULT_I_TOL);
    }
    CACHE[p].get_or_init(|| integral_i(p, DEFAULT_I_TOL)).clone()
}

/// The `p`-dependent factor `(p/2)(2/√π)^p Γ(p/2 + 1/2)` of the ds formula.
fn ds_subspace_factor(p: usize) -> f64 {
    let pf = p as f64;
    let log = (0.5 * pf).ln() + pf * (2.0 / PI.sqrt()).ln() + log_gamma(0.5 * pf + 0.5).expect("p >= 1");
    log.exp()
}

/// Expected decrease of one complete-polling direct-search iteration.
pub fn expected_decrease_ds(p: usize, d: usize) -> Result<FormulaResult> {
    check_dims(p, d)?;
    if d == 1 {
        return Ok(FormulaResult::closed(1.0, p, d));
    }
    let ratio = gamma_half_ratio(d)?.value;
    match p {
        1 => Ok(FormulaResult::closed(ratio / PI.sqrt(), p, d)),
        2 => Ok(FormulaResult::closed((2.0 / PI).sqrt() * ratio, p, d)),
        _ => {
            let ip = cached_integral_i(p)?;
            let factor = ds_subspace_factor(p) * ratio;
            Ok(FormulaResult {
                value: factor * ip.value,
                method: Method::Quadrature,
                p,
                d,
                estimated_abs_error: factor * ip.abs_error + CLOSED_FORM_ERROR,
            })
        }
    }
}

/// Expected decrease of one model-based iteration:
/// `Γ(d/2) Γ(p/2+1/2) / (Γ(d/2+1/2) Γ(p/2))`.
pub fn expected_decrease_mb(p: usize, d: usize) -> Result<FormulaResult> {
    check_dims(p, d)?;
    if d == 1 || p == d {
        return Ok(FormulaResult::closed(1.0, p, d));
    }
    let value = gamma_half_ratio(d)?.value / gamma_half_ratio(p)?.value;
    Ok(FormulaResult::closed(value, p, d))
}

pub fn expected_decrease(variant: Variant, p: usize, d: usize) -> Result<FormulaResult> {
    match variant {
        Variant::Ds => expected_decrease_ds(p, d),
        Variant::Mb => expected_decrease_mb(p, d),
    }
}

/// New function evaluations per iteration (averaged where the count is random).
///
/// Complete polling costs `2p`. The model-based step costs `p + 1`, except at
/// `p = 1` where the trial point coincides with the poll point half the time.
pub fn evaluation_cost(variant: Variant, p: usize) -> f64 {
    match (variant, p) {
        (Variant::Ds, _) => 2.0 * p as f64,
        (Variant::Mb, 1) => 1.5,
        (Variant::Mb, _) => p as f64 + 1.0,
    }
}

/// Opportunistic polling accepts the first improving point of the pair
/// `(e₁, -e₁)`: the decrease of the `p = 1` case at an average cost of 3/2.
pub const OPPORTUNISTIC_COST: f64 = 1.5;

pub fn per_evaluation_ds(p: usize, d: usize, opportunistic: bool) -> Result<FormulaResult> {
    check_dims(p, d)?;
    if opportunistic {
        let base = expected_decrease_ds(1, d)?;
        return Ok(FormulaResult { p, ..base.scaled(1.0 / OPPORTUNISTIC_COST) });
    }
    Ok(expected_decrease_ds(p, d)?.scaled(1.0 / evaluation_cost(Variant::Ds, p)))
}

pub fn per_evaluation_mb(p: usize, d: usize) -> Result<FormulaResult> {
    Ok(expected_decrease_mb(p, d)?.scaled(1.0 / evaluation_cost(Variant::Mb, p)))
}

pub fn per_evaluation(variant: Variant, p: usize, d: usize) -> Result<FormulaResult> {
    match variant {
        Variant::Ds => per_evaluation_ds(p, d, false),
        Variant::Mb => per_evaluation_mb(p, d),
    }
}

/// Rounds of evaluation when `cores` evaluations run concurrently.
///
/// Direct search polls `2p` points in `⌈2p/c⌉` rounds. The model-based step
/// needs `⌈p/c⌉` rounds for the simplex gradient plus one for the trial
/// point; at `p = 1` the trial point is skipped half the time.
pub fn parallel_cost(variant: Variant, p: usize, cores: usize) -> f64 {
    match (variant, p) {
        (Variant::Ds, _) => (2 * p).div_ceil(cores) as f64,
        (Variant::Mb, 1) => 1.5,
        (Variant::Mb, _) => p.div_ceil(cores) as f64 + 1.0,
    }
}

pub fn parallel_per_work(p: usize, d: usize, cores: usize, variant: Variant) -> Result<FormulaResult> {
    if cores == 0 {
        return Err(Error::Domain("cores must be at least 1".into()));
    }
    Ok(expected_decrease(variant, p, d)?.scaled(1.0 / parallel_cost(variant, p, cores)))
}

/// Large-`d` limits for `p ∈ {1, 2}`.
pub fn asymptotic_decrease(p: usize, d: usize, variant: Variant) -> Result<FormulaResult> {
    check_dims(p, d)?;
    let sd = (d as f64).sqrt();
    let sp = PI.sqrt();
    let value = match (variant, p) {
        (_, 1) => 2f64.sqrt() / (sp * sd),
        (Variant::Ds, 2) => 2.0 / (sp * sd),
        (Variant::Mb, 2) => sp / (2f64.sqrt() * sd),
        _ => return Err(Error::Unsupported(format!("asymptotic form only exists for p in {{1, 2}}, got p = {p}"))),
    };
    Ok(FormulaResult { value, method: Method::Asymptotic, p, d, estimated_abs_error: f64::NAN })
}
