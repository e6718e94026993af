//! Derivative-free optimization in random subspaces.
//!
//! Each driver iteration draws an orthonormal basis `B` of a random
//! `p`-dimensional subspace, restricts the objective to `z ↦ f(x + Bz)`,
//! runs one direct-search or model-based iteration on the restriction from
//! `z = 0`, and moves to `x + Bz*`.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::geometry::{sample_stiefel, sample_unit_vector, SubspaceBasis};
use crate::rng::RngStream;

/// A black-box objective `f: R^d → R`.
pub trait Objective {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
}

/// Wraps an objective with an evaluation counter.
pub struct ObjectiveHandle<F> {
    inner: F,
    evals: AtomicU64,
}

impl<F: Objective> ObjectiveHandle<F> {
    pub fn new(inner: F) -> Self {
        Self { inner, evals: AtomicU64::new(0) }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    /// Evaluates `f(x)`, counting the call; non-finite values are errors.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let eval = self.evals.fetch_add(1, Ordering::Relaxed) + 1;
        let value = self.inner.value(x);
        if !value.is_finite() {
            return Err(Error::NonFinite { value, eval });
        }
        Ok(value)
    }
}

/// `f|_p(z) = f(x + Bz)` with the value at `z = 0` already known.
pub struct SubspaceRestriction<'a, F> {
    pub base_point: &'a [f64],
    pub basis: &'a SubspaceBasis,
    pub objective: &'a ObjectiveHandle<F>,
    pub base_value: f64,
}

impl<'a, F: Objective> SubspaceRestriction<'a, F> {
    pub fn new(
        base_point: &'a [f64],
        basis: &'a SubspaceBasis,
        objective: &'a ObjectiveHandle<F>,
        base_value: f64,
    ) -> Result<Self> {
        if base_point.len() != basis.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: basis.ambient_dim(), found: base_point.len() });
        }
        if objective.dim() != base_point.len() {
            return Err(Error::DimensionMismatch { expected: objective.dim(), found: base_point.len() });
        }
        Ok(Self { base_point, basis, objective, base_value })
    }

    pub fn subspace_dim(&self) -> usize {
        self.basis.subspace_dim()
    }

    pub fn point(&self, z: &[f64]) -> Vec<f64> {
        let mut x = self.basis.lift(z);
        x.iter_mut().zip(self.base_point).for_each(|(xi, bi)| *xi += bi);
        x
    }

    pub fn evaluate(&self, z: &[f64]) -> Result<f64> {
        if z.iter().all(|&v| v == 0.0) {
            return Ok(self.base_value);
        }
        self.objective.evaluate(&self.point(z))
    }

    fn coordinate_step(&self, i: usize, step: f64) -> Result<f64> {
        let mut z = vec![0.0; self.subspace_dim()];
        z[i] = step;
        self.evaluate(&z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PollMode {
    Complete,
    Opportunistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationKind {
    DsComplete,
    DsOpportunistic,
    Mb,
}

impl std::str::FromStr for IterationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ds" | "ds-complete" => Ok(Self::DsComplete),
            "ds-opportunistic" => Ok(Self::DsOpportunistic),
            "mb" => Ok(Self::Mb),
            other => Err(Error::Unsupported(format!("unknown iteration kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    /// `z*`; all zeros when the incumbent is kept.
    pub step: Vec<f64>,
    pub new_evaluations: u64,
    /// `f(x^k) - f(x^{k+1}) >= 0`.
    pub achieved_decrease: f64,
    pub new_value: f64,
}

impl IterationOutcome {
    fn keep(p: usize, value: f64, evals: u64) -> Self {
        Self { step: vec![0.0; p], new_evaluations: evals, achieved_decrease: 0.0, new_value: value }
    }

    pub fn moved(&self) -> bool {
        self.achieved_decrease > 0.0
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("step size must be positive and finite, got {delta}")))
    }
}

/// Forward-difference values `f|_p(z + δ e_i)` and the simplex gradient
/// `(f|_p(z + δ e_i) - f|_p(z)) / δ` for the sample matrix `δ I_p`.
fn forward_differences<F: Objective>(
    r: &SubspaceRestriction<'_, F>,
    z: &[f64],
    delta: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = r.subspace_dim();
    if z.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: z.len() });
    }
    let fz = r.evaluate(z)?;
    let mut values = Vec::with_capacity(p);
    let mut grad = Vec::with_capacity(p);
    let mut probe = z.to_vec();
    for i in 0..p {
        probe[i] += delta;
        let v = r.evaluate(&probe)?;
        probe[i] = z[i];
        values.push(v);
        grad.push((v - fz) / delta);
    }
    Ok((grad, values))
}

/// Simplex gradient of the restriction at `z` with sample matrix `δ I_p`.
pub fn simplex_gradient<F: Objective>(r: &SubspaceRestriction<'_, F>, z: &[f64], delta: f64) -> Result<Vec<f64>> {
    check_delta(delta)?;
    Ok(forward_differences(r, z, delta)?.0)
}

/// One coordinate poll around `z = 0` along `±δ e_i`.
///
/// Points are visited as `e₁, -e₁, e₂, -e₂, …`. Complete polling keeps the
/// first strictly best point; opportunistic polling stops at the first point
/// that improves on the incumbent.
pub fn ds_iteration<F: Objective>(r: &SubspaceRestriction<'_, F>, delta: f64, mode: PollMode) -> Result<IterationOutcome> {
    check_delta(delta)?;
    let p = r.subspace_dim();
    let f0 = r.base_value;
    let mut best: Option<(usize, f64, f64)> = None;
    let mut evals = 0u64;
    for i in 0..p {
        for sign in [1.0, -1.0] {
            let v = r.coordinate_step(i, sign * delta)?;
            evals += 1;
            if v < best.map_or(f0, |b| b.2) {
                best = Some((i, sign, v));
                if mode == PollMode::Opportunistic {
                    return Ok(accept(p, f0, i, sign * delta, v, evals));
                }
            }
        }
    }
    Ok(match best {
        Some((i, sign, v)) => accept(p, f0, i, sign * delta, v, evals),
        None => IterationOutcome::keep(p, f0, evals),
    })
}

fn accept(p: usize, f0: f64, i: usize, step: f64, value: f64, evals: u64) -> IterationOutcome {
    let mut z = vec![0.0; p];
    z[i] = step;
    IterationOutcome { step: z, new_evaluations: evals, achieved_decrease: f0 - value, new_value: value }
}

/// Simplex gradients with norm below this are treated as zero.
pub const DEGENERATE_GRADIENT: f64 = 1e-14;

/// One linear-model trust-region step of radius `δ` around `z = 0`.
///
/// For `p = 1` with a negative gradient the trial point `δ e₁` is the poll
/// point already evaluated, so no extra evaluation is spent.
pub fn mb_iteration<F: Objective>(r: &SubspaceRestriction<'_, F>, delta: f64) -> Result<IterationOutcome> {
    check_delta(delta)?;
    let p = r.subspace_dim();
    let f0 = r.base_value;
    let origin = vec![0.0; p];
    let (grad, poll_values) = forward_differences(r, &origin, delta)?;
    let mut evals = p as u64;
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm < DEGENERATE_GRADIENT {
        return Ok(IterationOutcome::keep(p, f0, evals));
    }
    let trial: Vec<f64> = grad.iter().map(|g| -delta * g / norm).collect();
    let value = if p == 1 && grad[0] < 0.0 {
        poll_values[0]
    } else {
        evals += 1;
        r.evaluate(&trial)?
    };
    if value < f0 {
        Ok(IterationOutcome { step: trial, new_evaluations: evals, achieved_decrease: f0 - value, new_value: value })
    } else {
        Ok(IterationOutcome::keep(p, f0, evals))
    }
}

pub fn run_iteration<F: Objective>(r: &SubspaceRestriction<'_, F>, delta: f64, kind: IterationKind) -> Result<IterationOutcome> {
    match kind {
        IterationKind::DsComplete => ds_iteration(r, delta, PollMode::Complete),
        IterationKind::DsOpportunistic => ds_iteration(r, delta, PollMode::Opportunistic),
        IterationKind::Mb => mb_iteration(r, delta),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DriverConfig {
    pub p: usize,
    pub initial_step: f64,
    pub expand_factor: f64,
    pub contract_factor: f64,
    pub max_evaluations: u64,
    pub min_step: f64,
    pub iteration_kind: IterationKind,
}

impl Default for DriverConfig {
    fn default() -> Self {
        Self {
            p: 1,
            initial_step: 1.0,
            expand_factor: 1.0,
            contract_factor: 0.5,
            max_evaluations: 1000,
            min_step: 1e-8,
            iteration_kind: IterationKind::DsComplete,
        }
    }
}

impl DriverConfig {
    pub fn validate(&self, d: usize) -> Result<()> {
        check_dims(self.p, d)?;
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::Domain(format!("initial_step must be positive, got {}", self.initial_step)));
        }
        if !(self.contract_factor > 0.0 && self.contract_factor < 1.0) {
            return Err(Error::Domain(format!("contract_factor must lie in (0, 1), got {}", self.contract_factor)));
        }
        if !(self.expand_factor >= 1.0 && self.expand_factor.is_finite()) {
            return Err(Error::Domain(format!("expand_factor must be >= 1, got {}", self.expand_factor)));
        }
        if !(self.min_step > 0.0) {
            return Err(Error::Domain(format!("min_step must be positive, got {}", self.min_step)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: u64,
    pub eval_count: u64,
    pub best_value: f64,
    pub step_size: f64,
    pub decrease: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub final_point: Vec<f64>,
}

impl Trace {
    pub fn best_value(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.best_value)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,eval_count,best_value,step_size\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{:.16e},{:.16e}\n", r.iteration, r.eval_count, r.best_value, r.step_size));
        }
        out
    }
}

/// Runs the random-subspace driver until the evaluation budget is spent or
/// the step size drops below `min_step`.
///
/// The starting point is evaluated once up front and counts towards the
/// budget; its row is always the first in the trace. Step sizes are
/// multiplied by `expand_factor` after a successful iteration and by
/// `contract_factor` otherwise.
pub fn run_driver<F: Objective>(objective: &ObjectiveHandle<F>, x0: &[f64], config: &DriverConfig, rng: RngStream) -> Result<Trace> {
    let d = objective.dim();
    if x0.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x0.len() });
    }
    config.validate(d)?;
    let mut gen = rng.generator();
    let mut x = x0.to_vec();
    let mut fx = objective.evaluate(&x)?;
    let mut delta = config.initial_step;
    let mut rows = vec![TraceRow { iteration: 0, eval_count: objective.eval_count(), best_value: fx, step_size: delta, decrease: 0.0 }];
    let mut k = 0u64;
    while objective.eval_count() < config.max_evaluations && delta >= config.min_step {
        let basis = sample_stiefel(d, config.p, &mut gen)?;
        let restriction = SubspaceRestriction::new(&x, &basis, objective, fx)?;
        let outcome = run_iteration(&restriction, delta, config.iteration_kind)?;
        if outcome.moved() {
            x = restriction.point(&outcome.step);
            fx = outcome.new_value;
            delta *= config.expand_factor;
        } else {
            delta *= config.contract_factor;
        }
        k += 1;
        rows.push(TraceRow {
            iteration: k,
            eval_count: objective.eval_count(),
            best_value: fx,
            step_size: delta,
            decrease: outcome.achieved_decrease,
        });
    }
    Ok(Trace { rows, final_point: x })
}

/// Objectives used by the command line and the tests.
pub mod test_functions {
    use super::*;

    /// `f(x) = gᵀx`.
    #[derive(Debug, Clone)]
    pub struct Linear {
        pub gradient: Vec<f64>,
    }

    impl Objective for Linear {
        fn dim(&self) -> usize {
            self.gradient.len()
        }

        fn value(&self, x: &[f64]) -> f64 {
            self.gradient.iter().zip(x).map(|(g, v)| g * v).sum()
        }
    }

    /// `f(x) = ½‖x‖²`.
    #[derive(Debug, Clone)]
    pub struct SphereQuadratic {
        pub d: usize,
    }

    impl Objective for SphereQuadratic {
        fn dim(&self) -> usize {
            self.d
        }

        fn value(&self, x: &[f64]) -> f64 {
            0.5 * x.iter().map(|v| v * v).sum::<f64>()
        }
    }

    #[derive(Debug, Clone)]
    pub struct Rosenbrock {
        pub d: usize,
    }

    impl Objective for Rosenbrock {
        fn dim(&self) -> usize {
            self.d
        }

        fn value(&self, x: &[f64]) -> f64 {
            x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
        }
    }

    pub const NAMES: [&str; 3] = ["linear-random-g", "sphere-quadratic", "rosenbrock"];

    /// Builds a named objective and its conventional starting point. The
    /// linear objective draws its unit gradient from `rng`.
    pub fn named(name: &str, d: usize, rng: RngStream) -> Result<(Box<dyn Objective + Send + Sync>, Vec<f64>)> {
        if d == 0 {
            return Err(Error::InvalidDimension { p: 1, d });
        }
        match name {
            "linear-random-g" => {
                let g = sample_unit_vector(d, &mut rng.generator())?;
                Ok((Box::new(Linear { gradient: g.into_inner() }), vec![0.0; d]))
            }
            "sphere-quadratic" => Ok((Box::new(SphereQuadratic { d }), vec![1.0; d])),
            "rosenbrock" => {
                let x0 = (0..d).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect();
                Ok((Box::new(Rosenbrock { d }), x0))
            }
            other => Err(Error::Unsupported(format!("unknown test function '{other}' (known: {})", NAMES.join(", ")))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_functions::*;
    use super::*;

    struct Constant(usize);

    impl Objective for Constant {
        fn dim(&self) -> usize {
            self.0
        }
        fn value(&self, _: &[f64]) -> f64 {
            3.0
        }
    }

    fn unit(d: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        v
    }

    #[test]
    fn counter_increments_once_per_call() {
        let h = ObjectiveHandle::new(SphereQuadratic { d: 3 });
        for k in 1..=5 {
            h.evaluate(&[1.0, 2.0, 3.0]).unwrap();
            assert_eq!(h.eval_count(), k);
        }
        assert!(matches!(h.evaluate(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn non_finite_values_are_reported() {
        struct Bad;
        impl Objective for Bad {
            fn dim(&self) -> usize {
                1
            }
            fn value(&self, _: &[f64]) -> f64 {
                f64::NAN
            }
        }
        let h = ObjectiveHandle::new(Bad);
        assert!(matches!(h.evaluate(&[0.0]), Err(Error::NonFinite { eval: 1, .. })));
    }

    #[test]
    fn simplex_gradient_of_linear_is_projected_gradient() {
        let mut gen = RngStream::new(4).generator();
        let g = sample_unit_vector(7, &mut gen).unwrap().into_inner();
        let b = sample_stiefel(7, 3, &mut gen).unwrap();
        let h = ObjectiveHandle::new(Linear { gradient: g.clone() });
        let x = vec![0.5; 7];
        let fx = h.evaluate(&x).unwrap();
        let r = SubspaceRestriction::new(&x, &b, &h, fx).unwrap();
        let want = b.project(&g);
        for delta in [1.0, 0.1, 1e-3] {
            let got = simplex_gradient(&r, &[0.0; 3], delta).unwrap();
            for (a, w) in got.iter().zip(&want) {
                assert!((a - w).abs() < 1e-9, "delta={delta}");
            }
        }
        // away from the origin the value at z costs one evaluation
        let before = h.eval_count();
        simplex_gradient(&r, &[0.1, 0.0, 0.0], 0.5).unwrap();
        assert_eq!(h.eval_count() - before, 4);
        assert!(simplex_gradient(&r, &[0.0; 3], 0.0).is_err());
    }

    #[test]
    fn simplex_gradient_constant_and_quadratic() {
        let b = SubspaceBasis::coordinate(2, 2).unwrap();
        let hc = ObjectiveHandle::new(Constant(2));
        let r = SubspaceRestriction::new(&[0.0, 0.0], &b, &hc, 3.0).unwrap();
        assert_eq!(simplex_gradient(&r, &[0.0, 0.0], 0.3).unwrap(), vec![0.0, 0.0]);

        // f = ‖x‖², forward difference at 0 gives δ² / δ = δ
        struct Sq;
        impl Objective for Sq {
            fn dim(&self) -> usize {
                2
            }
            fn value(&self, x: &[f64]) -> f64 {
                x.iter().map(|v| v * v).sum()
            }
        }
        let hq = ObjectiveHandle::new(Sq);
        let r = SubspaceRestriction::new(&[0.0, 0.0], &b, &hq, 0.0).unwrap();
        let grad = simplex_gradient(&r, &[0.0, 0.0], 0.1).unwrap();
        for v in grad {
            assert!((v - 0.1).abs() < 1e-15);
        }
        assert_eq!(hq.eval_count(), 2);
    }

    #[test]
    fn complete_poll_on_coordinate_gradient() {
        let d = 4;
        let h = ObjectiveHandle::new(Linear { gradient: unit(d, 0) });
        let b = SubspaceBasis::coordinate(d, d).unwrap();
        let x = vec![0.0; d];
        let r = SubspaceRestriction::new(&x, &b, &h, 0.0).unwrap();
        let out = ds_iteration(&r, 1.0, PollMode::Complete).unwrap();
        assert_eq!(out.achieved_decrease, 1.0);
        assert_eq!(out.step, vec![-1.0, 0.0, 0.0, 0.0]);
        assert_eq!(out.new_evaluations, 2 * d as u64);
    }

    #[test]
    fn ties_go_to_lowest_index_then_positive_sign() {
        let h = ObjectiveHandle::new(Linear { gradient: vec![-1.0, -1.0] });
        let b = SubspaceBasis::coordinate(2, 2).unwrap();
        let r = SubspaceRestriction::new(&[0.0, 0.0], &b, &h, 0.0).unwrap();
        let out = ds_iteration(&r, 1.0, PollMode::Complete).unwrap();
        assert_eq!(out.step, vec![1.0, 0.0]);
    }

    #[test]
    fn opportunistic_stops_at_first_improvement() {
        let h = ObjectiveHandle::new(Linear { gradient: vec![0.0, 1.0, -1.0] });
        let b = SubspaceBasis::coordinate(3, 3).unwrap();
        let r = SubspaceRestriction::new(&[0.0; 3], &b, &h, 0.0).unwrap();
        let out = ds_iteration(&r, 1.0, PollMode::Opportunistic).unwrap();
        // e1 and -e1 tie the incumbent, e2 is worse, -e2 improves
        assert_eq!(out.new_evaluations, 4);
        assert_eq!(out.step, vec![0.0, -1.0, 0.0]);
        assert_eq!(out.achieved_decrease, 1.0);
    }

    #[test]
    fn mb_on_constant_keeps_incumbent() {
        let h = ObjectiveHandle::new(Constant(3));
        let b = SubspaceBasis::coordinate(3, 2).unwrap();
        let r = SubspaceRestriction::new(&[0.0; 3], &b, &h, 3.0).unwrap();
        let out = mb_iteration(&r, 1.0).unwrap();
        assert!(!out.moved());
        assert_eq!(out.achieved_decrease, 0.0);
        assert_eq!(out.new_evaluations, 2);
    }

    #[test]
    fn mb_full_space_decrease_is_one() {
        let mut gen = RngStream::new(2).generator();
        let d = 6;
        let g = sample_unit_vector(d, &mut gen).unwrap().into_inner();
        let b = sample_stiefel(d, d, &mut gen).unwrap();
        let h = ObjectiveHandle::new(Linear { gradient: g });
        let r = SubspaceRestriction::new(&[0.0; 6], &b, &h, 0.0).unwrap();
        let out = mb_iteration(&r, 1.0).unwrap();
        assert!((out.achieved_decrease - 1.0).abs() < 1e-12);
        assert_eq!(out.new_evaluations, d as u64 + 1);
    }

    #[test]
    fn mb_one_dimensional_reuse() {
        let b = SubspaceBasis::coordinate(1, 1).unwrap();
        let down = ObjectiveHandle::new(Linear { gradient: vec![-1.0] });
        let r = SubspaceRestriction::new(&[0.0], &b, &down, 0.0).unwrap();
        let out = mb_iteration(&r, 0.5).unwrap();
        assert_eq!(out.new_evaluations, 1);
        assert_eq!(out.step, vec![0.5]);
        let up = ObjectiveHandle::new(Linear { gradient: vec![1.0] });
        let r = SubspaceRestriction::new(&[0.0], &b, &up, 0.0).unwrap();
        let out = mb_iteration(&r, 0.5).unwrap();
        assert_eq!(out.new_evaluations, 2);
        assert_eq!(out.step, vec![-0.5]);
    }

    #[test]
    fn zero_budget_gives_single_row() {
        let h = ObjectiveHandle::new(SphereQuadratic { d: 3 });
        let cfg = DriverConfig { max_evaluations: 0, ..Default::default() };
        let trace = run_driver(&h, &[1.0; 3], &cfg, RngStream::new(0)).unwrap();
        assert_eq!(trace.rows.len(), 1);
        assert_eq!(trace.to_csv().lines().count(), 2);
    }

    #[test]
    fn driver_validates_inputs() {
        let h = ObjectiveHandle::new(SphereQuadratic { d: 3 });
        let bad_p = DriverConfig { p: 4, ..Default::default() };
        assert!(run_driver(&h, &[1.0; 3], &bad_p, RngStream::new(0)).is_err());
        assert!(run_driver(&h, &[1.0; 2], &DriverConfig::default(), RngStream::new(0)).is_err());
        let bad_contract = DriverConfig { contract_factor: 1.0, ..Default::default() };
        assert!(run_driver(&h, &[1.0; 3], &bad_contract, RngStream::new(0)).is_err());
    }

    #[test]
    fn named_functions() {
        for name in NAMES {
            let (f, x0) = named(name, 4, RngStream::new(1)).unwrap();
            assert_eq!(f.dim(), 4);
            assert!(f.value(&x0).is_finite());
        }
        assert!(named("himmelblau", 2, RngStream::new(1)).is_err());
        let (r, _) = named("rosenbrock", 3, RngStream::new(0)).unwrap();
        assert_eq!(r.value(&[1.0, 1.0, 1.0]), 0.0);
    }
}
