//! Result tables comparing exact, asymptotic and simulated decrease.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{
    asymptotic_decrease, evaluation_cost, expected_decrease, parallel_cost, parallel_per_work, Variant, P_MAX,
};
use crate::mc::{estimate, Reduction, DEFAULT_N_SIMS};
use crate::rng::RngStream;

pub mod verify;

pub const CSV_HEADER: &str = "variant,d,p,method,metric,value,std_error,n_sims,seed";

/// Dimensions used for the varying-`d` grids.
pub const D_GRID: [usize; 8] = [8, 16, 32, 64, 128, 256, 512, 1024];

/// Subspace dimensions used for the varying-`p` grids at `d = 1000`.
pub const P_GRID: [usize; 12] = [1, 2, 3, 4, 5, 10, 20, 50, 100, 200, 500, 1000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowMethod {
    Mc,
    Exact,
    Asymptotic,
}

impl fmt::Display for RowMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowMethod::Mc => "mc",
            RowMethod::Exact => "exact",
            RowMethod::Asymptotic => "asymptotic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    PerIteration,
    PerEvaluation,
    PerWork(usize),
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::PerIteration => f.write_str("per-iteration"),
            Metric::PerEvaluation => f.write_str("per-evaluation"),
            Metric::PerWork(c) => write!(f, "per-work({c})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub variant: Variant,
    pub d: usize,
    pub p: usize,
    pub method: RowMethod,
    pub metric: Metric,
    pub value: f64,
    pub std_error: Option<f64>,
    pub n_sims: Option<usize>,
    pub seed: Option<u64>,
}

impl ResultRow {
    fn exact(variant: Variant, d: usize, p: usize, metric: Metric, value: f64) -> Self {
        Self { variant, d, p, method: RowMethod::Exact, metric, value, std_error: None, n_sims: None, seed: None }
    }

    pub fn csv_line(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{:.16e},{},{},{}",
            self.variant,
            self.d,
            self.p,
            self.method,
            self.metric,
            self.value,
            opt(self.std_error.map(|s| format!("{s:.16e}"))),
            opt(self.n_sims.map(|n| n.to_string())),
            opt(self.seed.map(|s| s.to_string())),
        )
    }
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PRule {
    /// `{1, 2, d/2, d}` with integer division.
    Standard,
    List(Vec<usize>),
}

impl PRule {
    /// Subspace dimensions for ambient dimension `d`, deduplicated, in rule order.
    pub fn values(&self, d: usize) -> Vec<usize> {
        let raw = match self {
            PRule::Standard => vec![1, 2, d / 2, d],
            PRule::List(ps) => ps.clone(),
        };
        let mut out = Vec::new();
        for p in raw {
            if p >= 1 && p <= d && !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outputs {
    Decrease,
    PerEvaluation,
    Both,
}

impl Outputs {
    fn metrics(self) -> &'static [Metric] {
        match self {
            Outputs::Decrease => &[Metric::PerIteration],
            Outputs::PerEvaluation => &[Metric::PerEvaluation],
            Outputs::Both => &[Metric::PerIteration, Metric::PerEvaluation],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Include {
    pub formula: bool,
    pub monte_carlo: bool,
    pub asymptotic: bool,
}

impl Default for Include {
    fn default() -> Self {
        Self { formula: true, monte_carlo: true, asymptotic: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub variant: Variant,
    pub d_values: Vec<usize>,
    pub p_rule: PRule,
    #[serde(default = "default_n_sims")]
    pub n_sims: usize,
    #[serde(default)]
    pub seed: u64,
    pub outputs: Outputs,
    #[serde(default)]
    pub include: Include,
}

fn default_n_sims() -> usize {
    DEFAULT_N_SIMS
}

pub const FIGURE_NAMES: [&str; 9] = [
    "ds-vary-d",
    "ds-vary-p",
    "ds-perfev-vary-d",
    "ds-perfev-vary-p",
    "mb-vary-d",
    "mb-vary-p",
    "mb-perfev-vary-d",
    "mb-perfev-vary-p",
    "parallel-sweep",
];

impl ExperimentSpec {
    /// The named reproduction grids (all but `parallel-sweep`, which has its
    /// own parameters; see [`run_parallel_sweep`]).
    pub fn named(name: &str) -> Result<Self> {
        let (variant, rest) = match name.split_once('-') {
            Some(("ds", rest)) => (Variant::Ds, rest),
            Some(("mb", rest)) => (Variant::Mb, rest),
            _ => return Err(Error::Unsupported(format!("unknown figure '{name}'"))),
        };
        let (outputs, axis) = match rest.strip_prefix("perfev-") {
            Some(axis) => (Outputs::PerEvaluation, axis),
            None => (Outputs::Decrease, rest),
        };
        let (d_values, p_rule) = match axis {
            "vary-d" => (D_GRID.to_vec(), PRule::Standard),
            "vary-p" => (vec![1000], PRule::List(P_GRID.to_vec())),
            _ => return Err(Error::Unsupported(format!("unknown figure '{name}'"))),
        };
        Ok(Self {
            name: name.to_string(),
            variant,
            d_values,
            p_rule,
            n_sims: DEFAULT_N_SIMS,
            seed: 0,
            outputs,
            include: Include::default(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sims == 0 {
            return Err(Error::Domain("n_sims must be at least 1".into()));
        }
        if self.d_values.is_empty() || self.d_values.contains(&0) {
            return Err(Error::Domain("d_values must be non-empty positive integers".into()));
        }
        if let PRule::List(ps) = &self.p_rule {
            let dmax = *self.d_values.iter().max().expect("non-empty");
            if ps.is_empty() || ps.iter().any(|&p| p == 0 || p > dmax) {
                return Err(Error::Domain(format!("p values must lie in 1..={dmax}")));
            }
        }
        Ok(())
    }
}

/// Substream for one `(variant, d, p)` cell; tags keep unrelated uses apart.
pub fn cell_stream(seed: u64, tag: u64, variant: Variant, d: usize, p: usize) -> RngStream {
    let v = match variant {
        Variant::Ds => 0,
        Variant::Mb => 1,
    };
    RngStream::new(seed).split(tag).split(v).split(d as u64).split(p as u64)
}

fn has_formula(variant: Variant, p: usize) -> bool {
    variant == Variant::Mb || p <= P_MAX
}

/// Emits rows for every `(d, p)` cell of `spec` in grid order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let variant = spec.variant;
    let mut rows = Vec::new();
    for &d in &spec.d_values {
        for p in spec.p_rule.values(d) {
            let mc = if spec.include.monte_carlo {
                Some(estimate(variant, p, d, spec.n_sims, cell_stream(spec.seed, 0, variant, d, p), Reduction::Reduced)?)
            } else {
                None
            };
            let exact = if spec.include.formula && has_formula(variant, p) {
                Some(expected_decrease(variant, p, d)?.value)
            } else {
                None
            };
            let asym = if spec.include.asymptotic && p <= 2 {
                Some(asymptotic_decrease(p, d, variant)?.value)
            } else {
                None
            };
            for &metric in spec.outputs.metrics() {
                let scale = match metric {
                    Metric::PerEvaluation => 1.0 / evaluation_cost(variant, p),
                    _ => 1.0,
                };
                if let Some(e) = mc {
                    rows.push(ResultRow {
                        variant,
                        d,
                        p,
                        method: RowMethod::Mc,
                        metric,
                        value: e.mean * scale,
                        std_error: Some(e.std_error * scale),
                        n_sims: Some(e.n_sims),
                        seed: Some(spec.seed),
                    });
                }
                if let Some(v) = exact {
                    rows.push(ResultRow::exact(variant, d, p, metric, v * scale));
                }
                if let Some(v) = asym {
                    rows.push(ResultRow { method: RowMethod::Asymptotic, ..ResultRow::exact(variant, d, p, metric, v * scale) });
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub variant: Variant,
    pub d: usize,
    pub cores: usize,
    /// Smallest maximizer.
    pub argmax_p: usize,
    /// All grid points within `1e-12` relative of the maximum.
    pub tied_p: Vec<usize>,
    pub max_value: f64,
}

/// Subspace dimensions swept for `cores` evaluators.
///
/// Model-based steps use multiples of `c`. Direct search polls `2p` points,
/// so its grid steps by `c/2` (at least 1).
pub fn sweep_grid(variant: Variant, d: usize, cores: usize, p_multiples: usize) -> Vec<usize> {
    let step = match variant {
        Variant::Mb => cores,
        Variant::Ds => (cores / 2).max(1),
    };
    let top = (p_multiples * cores).min(d);
    (1..).map(|k| k * step).take_while(|&p| p <= top).collect()
}

/// Per-work values over the sweep grid for each core count. Direct-search
/// cells beyond the quadrature range fall back to the reduced estimator.
pub fn run_parallel_sweep(
    variant: Variant,
    d: usize,
    cores_list: &[usize],
    p_multiples: usize,
    n_sims: usize,
    seed: u64,
) -> Result<(Vec<ResultRow>, Vec<SweepSummary>)> {
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &c in cores_list {
        if c == 0 {
            return Err(Error::Domain("core counts must be positive".into()));
        }
        let grid = sweep_grid(variant, d, c, p_multiples);
        if grid.is_empty() {
            return Err(Error::Domain(format!("empty sweep grid for d = {d}, c = {c}")));
        }
        let mut values = Vec::with_capacity(grid.len());
        for &p in &grid {
            let row = if has_formula(variant, p) {
                let v = parallel_per_work(p, d, c, variant)?.value;
                ResultRow::exact(variant, d, p, Metric::PerWork(c), v)
            } else {
                let e = estimate(variant, p, d, n_sims, cell_stream(seed, 1, variant, d, p), Reduction::Reduced)?;
                let cost = parallel_cost(variant, p, c);
                ResultRow {
                    variant,
                    d,
                    p,
                    method: RowMethod::Mc,
                    metric: Metric::PerWork(c),
                    value: e.mean / cost,
                    std_error: Some(e.std_error / cost),
                    n_sims: Some(n_sims),
                    seed: Some(seed),
                }
            };
            values.push(row.value);
            rows.push(row);
        }
        let max_value = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tied_p: Vec<usize> = grid
            .iter()
            .zip(&values)
            .filter(|(_, v)| (max_value - **v).abs() <= 1e-12 * max_value)
            .map(|(p, _)| *p)
            .collect();
        summaries.push(SweepSummary { variant, d, cores: c, argmax_p: tied_p[0], tied_p, max_value });
    }
    Ok((rows, summaries))
}
