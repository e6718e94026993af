//! The reproduction gate suite.
//!
//! Each gate checks one family of claims about the decrease formulas, the
//! estimator or the optimizer, and returns the rows it compared so the
//! whole run can be written out as one CSV.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{cell_stream, run_parallel_sweep, Metric, ResultRow, RowMethod, D_GRID};
use crate::dfo::{ds_iteration, mb_iteration, test_functions::Linear, ObjectiveHandle, PollMode, SubspaceRestriction};
use crate::error::Result;
use crate::formulas::{
    asymptotic_decrease, expected_decrease, expected_decrease_ds, expected_decrease_mb, integral_i, per_evaluation,
    Variant, P_MAX,
};
use crate::geometry::{sample_stiefel, sample_unit_vector};
use crate::mc::{estimate, paired_compare, paired_ratio, DecreaseEstimate, Reduction, DEFAULT_N_SIMS};
use crate::rng::RngStream;
use crate::specfun::gamma_half_ratio;

/// Agreement threshold in standard errors.
pub const Z: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub n_sims: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, n_sims: DEFAULT_N_SIMS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    /// Human-readable description of every failed check (empty on success).
    pub failures: Vec<String>,
    pub checks: usize,
    #[serde(skip)]
    pub rows: Vec<ResultRow>,
}

impl GateOutcome {
    pub fn summary(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("[{status}] AC{:<2} {} ({} checks)", self.id, self.name, self.checks);
        for f in &self.failures {
            s.push_str("\n       ");
            s.push_str(f);
        }
        s
    }
}

struct Gate {
    id: u32,
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
    rows: Vec<ResultRow>,
}

impl Gate {
    fn new(id: u32, name: &'static str) -> Self {
        Self { id, name, checks: 0, failures: Vec::new(), rows: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> GateOutcome {
        GateOutcome {
            id: self.id,
            name: self.name.to_string(),
            passed: self.failures.is_empty() && self.checks > 0,
            failures: self.failures,
            checks: self.checks,
            rows: self.rows,
        }
    }
}

fn mc_row(e: &DecreaseEstimate, seed: u64) -> ResultRow {
    ResultRow {
        variant: e.variant,
        d: e.d,
        p: e.p,
        method: RowMethod::Mc,
        metric: Metric::PerIteration,
        value: e.mean,
        std_error: Some(e.std_error),
        n_sims: Some(e.n_sims),
        seed: Some(seed),
    }
}

fn exact_row(variant: Variant, d: usize, p: usize, metric: Metric, value: f64) -> ResultRow {
    ResultRow { variant, d, p, method: RowMethod::Exact, metric, value, std_error: None, n_sims: None, seed: None }
}

/// Monte Carlo against the formula on a `(d, p)` grid.
fn formula_vs_mc(gate: &mut Gate, cfg: &VerifyConfig, variant: Variant, tag: u64, cells: &[(usize, usize)]) -> Result<()> {
    for &(d, p) in cells {
        let exact = expected_decrease(variant, p, d)?.value;
        let e = estimate(variant, p, d, cfg.n_sims, cell_stream(cfg.seed, tag, variant, d, p), Reduction::Reduced)?;
        // with p = d the mb replicate is identically 1 and the standard error vanishes
        let ok = (e.mean - exact).abs() <= Z * e.std_error + 1e-14;
        gate.check(ok, || format!("{variant} p={p} d={d}: mc {:.6} ± {:.2e} vs exact {exact:.6}", e.mean, e.std_error));
        gate.rows.push(mc_row(&e, cfg.seed));
        gate.rows.push(exact_row(variant, d, p, Metric::PerIteration, exact));
    }
    Ok(())
}

pub fn gate_closed_form_ds(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(1, "closed-form cross-check (ds)");
    let cells: Vec<_> = D_GRID.iter().flat_map(|&d| [(d, 1), (d, 2)]).collect();
    formula_vs_mc(&mut gate, cfg, Variant::Ds, 10, &cells)?;
    Ok(gate.finish())
}

pub fn gate_closed_form_mb(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(2, "closed-form cross-check (mb)");
    let cells: Vec<_> = D_GRID.iter().flat_map(|&d| [(d, 1), (d, 2), (d, d / 2), (d, d)]).collect();
    formula_vs_mc(&mut gate, cfg, Variant::Mb, 11, &cells)?;
    for &d in &D_GRID {
        let v = expected_decrease_mb(d, d)?.value;
        gate.check(v == 1.0, || format!("E_MB[{d},{d}] = {v:e}, expected exactly 1"));
    }
    Ok(gate.finish())
}

/// Reference constants `E_DS[3,d]/ratio(d)` and `E_DS[4,d]/ratio(d)`.
pub const DS_P3_CONSTANT: f64 = 0.938;
pub const DS_P4_CONSTANT: f64 = 1.036;

pub fn gate_quadrature_constants(_cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(3, "quadrature constants");
    let i2 = integral_i(2, 1e-12)?.value;
    gate.check((i2 - FRAC_1_SQRT_2).abs() < 1e-10, || format!("I(2) = {i2:.15}"));
    for &d in D_GRID.iter().chain(&[1000, 1_000_000]) {
        let r = gamma_half_ratio(d)?.value;
        for (p, target) in [(3, DS_P3_CONSTANT), (4, DS_P4_CONSTANT)] {
            let e = expected_decrease_ds(p, d)?.value;
            let c = e / r;
            gate.check((c - target).abs() <= 1e-3, || format!("E_DS[{p},{d}]/ratio = {c:.6}, expected {target} ± 0.001"));
            gate.rows.push(exact_row(Variant::Ds, d, p, Metric::PerIteration, e));
        }
    }
    Ok(gate.finish())
}

pub fn gate_ratio_identities(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(4, "ratio identities");
    let cases = [
        (Variant::Ds, false, SQRT_2),
        (Variant::Mb, false, PI / 2.0),
        (Variant::Ds, true, SQRT_2 / 2.0),
        (Variant::Mb, true, PI / 4.0),
    ];
    for &(variant, per_eval, target) in &cases {
        for d in [2usize, 3, 8, 100, 1000, 1024, 1_000_000] {
            let f = |p| -> Result<f64> {
                Ok(if per_eval { per_evaluation(variant, p, d)?.value } else { expected_decrease(variant, p, d)?.value })
            };
            let ratio = f(2)? / f(1)?;
            gate.check((ratio - target).abs() <= 1e-10, || {
                format!("{variant} per_eval={per_eval} d={d}: formula ratio {ratio:.15} vs {target:.15}")
            });
        }
        let stream = cell_stream(cfg.seed, 40 + per_eval as u64, variant, 1000, 2);
        let est = paired_ratio(variant, 2, 1, 1000, cfg.n_sims, stream, per_eval)?;
        gate.check((est.ratio - target).abs() <= Z * est.std_error, || {
            format!("{variant} per_eval={per_eval} d=1000: paired MC ratio {:.5} ± {:.2e} vs {target:.5}", est.ratio, est.std_error)
        });
    }
    Ok(gate.finish())
}

pub fn gate_per_evaluation_monotonicity(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(5, "per-evaluation monotonicity");
    for d in [64usize, 1024] {
        let series = |variant: Variant, ps: Vec<usize>, gate: &mut Gate| -> Result<()> {
            let vals = ps.iter().map(|&p| per_evaluation(variant, p, d).map(|r| r.value)).collect::<Result<Vec<_>>>()?;
            for (w, pv) in vals.windows(2).zip(ps.windows(2)) {
                gate.check(w[0] > w[1], || format!("{variant} d={d}: E^F[{}] = {:.6e} <= E^F[{}] = {:.6e}", pv[0], w[0], pv[1], w[1]));
            }
            for (&p, &v) in ps.iter().zip(&vals) {
                gate.rows.push(exact_row(variant, d, p, Metric::PerEvaluation, v));
            }
            Ok(())
        };
        series(Variant::Ds, (1..=P_MAX).collect(), &mut gate)?;
        // the mb chain starts at p = 1 with its reduced 3/2 cost, then p = 2..min(d-1, 64)
        series(Variant::Mb, (1..=64.min(d - 1)).collect(), &mut gate)?;
    }
    for variant in [Variant::Ds, Variant::Mb] {
        for p in 1..=5usize {
            let stream = cell_stream(cfg.seed, 50, variant, 1000, p);
            let diff = paired_compare(variant, p, p + 1, 1000, cfg.n_sims, stream)?;
            gate.check(diff.delta_mean > Z * diff.delta_std_error, || {
                format!("{variant} p={p}->{}: paired drop {:.3e} ± {:.2e}", p + 1, diff.delta_mean, diff.delta_std_error)
            });
        }
    }
    Ok(gate.finish())
}

pub fn gate_separability(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(6, "separability");
    let mut gen = RngStream::new(cfg.seed).split(60).generator();
    for k in 0..100 {
        let variant = if k % 2 == 0 { Variant::Ds } else { Variant::Mb };
        let d1 = gen.random_range(1..=2048usize);
        let d2 = gen.random_range(1..=2048usize);
        let cap = match variant {
            Variant::Ds => d1.min(d2).min(P_MAX),
            Variant::Mb => d1.min(d2),
        };
        let p1 = gen.random_range(1..=cap);
        let p2 = gen.random_range(1..=cap);
        let e = |p, d| expected_decrease(variant, p, d).map(|r| r.value);
        let lhs = e(p1, d1)? * e(p2, d2)?;
        let rhs = e(p1, d2)? * e(p2, d1)?;
        gate.check((lhs - rhs).abs() <= 1e-10 * lhs.abs(), || {
            format!("{variant} (p1,p2,d1,d2)=({p1},{p2},{d1},{d2}): {lhs:e} vs {rhs:e}")
        });
    }
    Ok(gate.finish())
}

pub fn gate_asymptotics(_cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(7, "large-d asymptotics");
    for variant in [Variant::Ds, Variant::Mb] {
        for d in [100usize, 128, 256, 512, 1000, 1024, 10_000, 100_000, 1_000_000] {
            for p in [1usize, 2] {
                let exact = expected_decrease(variant, p, d)?.value;
                let asym = asymptotic_decrease(p, d, variant)?.value;
                let rel = (asym - exact).abs() / exact;
                gate.check(rel < 0.01, || format!("{variant} p={p} d={d}: relative gap {rel:.3e}"));
                gate.rows.push(exact_row(variant, d, p, Metric::PerIteration, exact));
                gate.rows.push(ResultRow { method: RowMethod::Asymptotic, ..exact_row(variant, d, p, Metric::PerIteration, asym) });
            }
        }
    }
    Ok(gate.finish())
}

/// Basis-sampling estimator against the first-`p`-coordinates reduction.
pub const BASIS_INVARIANCE_CELLS: [(usize, usize); 4] = [(1, 16), (4, 16), (8, 64), (32, 64)];

pub fn gate_basis_invariance(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(8, "basis invariance");
    for variant in [Variant::Ds, Variant::Mb] {
        for &(p, d) in &BASIS_INVARIANCE_CELLS {
            let full = estimate(variant, p, d, cfg.n_sims, cell_stream(cfg.seed, 80, variant, d, p), Reduction::FullBasis)?;
            let red = estimate(variant, p, d, cfg.n_sims, cell_stream(cfg.seed, 81, variant, d, p), Reduction::Reduced)?;
            let se = full.std_error.hypot(red.std_error);
            gate.check((full.mean - red.mean).abs() <= Z * se, || {
                format!("{variant} p={p} d={d}: full {:.6} vs reduced {:.6} (combined se {se:.2e})", full.mean, red.mean)
            });
            gate.rows.push(mc_row(&full, cfg.seed));
            gate.rows.push(mc_row(&red, cfg.seed));
        }
    }
    Ok(gate.finish())
}

pub fn gate_parallel_sweeps(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(9, "parallel sweeps");
    let (rows, ds) = run_parallel_sweep(Variant::Ds, 64, &[2, 4, 8], 100, cfg.n_sims, cfg.seed)?;
    gate.rows.extend(rows);
    for s in &ds {
        gate.check(s.tied_p == vec![s.cores / 2], || format!("ds d=64 c={}: maximizers {:?}, expected [{}]", s.cores, s.tied_p, s.cores / 2));
    }
    let (rows, mb) = run_parallel_sweep(Variant::Mb, 128, &[1, 2, 4, 8], 100, cfg.n_sims, cfg.seed)?;
    gate.rows.extend(rows);
    for s in &mb {
        let expected = if s.cores == 2 { vec![2, 4] } else { vec![s.cores] };
        gate.check(s.argmax_p == s.cores && s.tied_p == expected, || {
            format!("mb d=128 c={}: maximizers {:?}, expected {:?}", s.cores, s.tied_p, expected)
        });
    }
    Ok(gate.finish())
}

/// Iteration counts for the stochastic evaluation-count checks.
pub const REUSE_ITERATIONS: usize = 10_000;

pub fn gate_optimizer_behavior(cfg: &VerifyConfig) -> Result<GateOutcome> {
    let mut gate = Gate::new(10, "optimizer behavior on linear objectives");
    let mut gen = RngStream::new(cfg.seed).split(100).generator();
    for &d in &[10usize, 50] {
        for &p in &[1usize, 2, 3, 5, 8] {
            for _ in 0..100 {
                let g = sample_unit_vector(d, &mut gen)?.into_inner();
                let basis = sample_stiefel(d, p, &mut gen)?;
                let x: Vec<f64> = (0..d).map(|_| gen.random_range(-1.0..1.0)).collect();
                let delta = gen.random_range(0.05..2.0);
                let proj = basis.project(&g);
                let inf = proj.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let two = proj.iter().map(|v| v * v).sum::<f64>().sqrt();
                let h = ObjectiveHandle::new(Linear { gradient: g });
                let fx = h.evaluate(&x)?;
                let r = SubspaceRestriction::new(&x, &basis, &h, fx)?;

                let before = h.eval_count();
                let ds = ds_iteration(&r, delta, PollMode::Complete)?;
                let ds_evals = h.eval_count() - before;
                gate.check((ds.achieved_decrease - inf * delta).abs() <= 1e-12, || {
                    format!("ds d={d} p={p}: decrease {:e} vs δ‖Bᵀg‖∞ {:e}", ds.achieved_decrease, inf * delta)
                });
                gate.check(ds_evals == 2 * p as u64 && ds.new_evaluations == ds_evals, || format!("ds d={d} p={p}: {ds_evals} evaluations"));

                let before = h.eval_count();
                let mb = mb_iteration(&r, delta)?;
                let mb_evals = h.eval_count() - before;
                gate.check((mb.achieved_decrease - two * delta).abs() <= 1e-12, || {
                    format!("mb d={d} p={p}: decrease {:e} vs δ‖Bᵀg‖₂ {:e}", mb.achieved_decrease, two * delta)
                });
                let ok = if p == 1 { mb_evals == 1 || mb_evals == 2 } else { mb_evals == p as u64 + 1 };
                gate.check(ok && mb.new_evaluations == mb_evals, || format!("mb d={d} p={p}: {mb_evals} evaluations"));
            }
        }
    }

    // p = 1: the model step and the opportunistic poll both average 3/2 evaluations
    let d = 20;
    let mut mb_counts = Vec::with_capacity(REUSE_ITERATIONS);
    let mut opp_counts = Vec::with_capacity(REUSE_ITERATIONS);
    for _ in 0..REUSE_ITERATIONS {
        let g = sample_unit_vector(d, &mut gen)?.into_inner();
        let basis = sample_stiefel(d, 1, &mut gen)?;
        let h = ObjectiveHandle::new(Linear { gradient: g });
        let x = vec![0.0; d];
        let r = SubspaceRestriction::new(&x, &basis, &h, 0.0)?;
        mb_counts.push(mb_iteration(&r, 1.0)?.new_evaluations as f64);
        opp_counts.push(ds_iteration(&r, 1.0, PollMode::Opportunistic)?.new_evaluations as f64);
    }
    for (label, counts) in [("mb p=1", &mb_counts), ("ds opportunistic p=1", &opp_counts)] {
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<f64>() / n;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        gate.check((mean - 1.5).abs() <= Z * se, || format!("{label}: mean evaluations {mean:.4} ± {se:.4}, expected 1.5"));
    }
    Ok(gate.finish())
}

pub type GateFn = fn(&VerifyConfig) -> Result<GateOutcome>;

pub const GATES: [GateFn; 10] = [
    gate_closed_form_ds,
    gate_closed_form_mb,
    gate_quadrature_constants,
    gate_ratio_identities,
    gate_per_evaluation_monotonicity,
    gate_separability,
    gate_asymptotics,
    gate_basis_invariance,
    gate_parallel_sweeps,
    gate_optimizer_behavior,
];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub gates: Vec<GateOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }

    pub fn rows(&self) -> Vec<ResultRow> {
        self.gates.iter().flat_map(|g| g.rows.iter().copied()).collect()
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let gates = GATES.iter().map(|gate| gate(cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { gates })
}
