//! `subdfo`: exact formulas, Monte Carlo estimates, figure grids, optimizer
//! runs and the verification suite from the command line.

mod cli;
mod output;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde_json::json;
use subdfo::dfo::test_functions::named;
use subdfo::dfo::{run_driver, DriverConfig, ObjectiveHandle};
use subdfo::experiments::verify::{run_all, VerifyConfig};
use subdfo::experiments::{run_experiment, run_parallel_sweep, ExperimentSpec, Include, Metric, PRule, ResultRow, RowMethod};
use subdfo::formulas::{asymptotic_decrease, expected_decrease, parallel_per_work, per_evaluation};
use subdfo::mc::{estimate, Reduction, DEFAULT_N_SIMS};
use subdfo::{RngStream, Variant};

use cli::{Cli, Command, Common, FigureArgs, OptimizeArgs};
use output::{Format, Sink};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = cli.common;
    match cli.command {
        Command::Formula { asymptotic_only } => formula(&common, asymptotic_only),
        Command::Mc { full_basis } => mc(&common, full_basis),
        Command::Figure(args) => figure(&common, &args),
        Command::Optimize(args) => optimize(&common, &args),
        Command::Verify => verify(&common),
    }
}

fn single<T: Copy>(values: &[T], flag: &str) -> Result<Vec<T>> {
    if values.is_empty() {
        bail!("--{flag} is required");
    }
    Ok(values.to_vec())
}

fn exact_row(variant: Variant, d: usize, p: usize, method: RowMethod, metric: Metric, value: f64) -> ResultRow {
    ResultRow { variant, d, p, method, metric, value, std_error: None, n_sims: None, seed: None }
}

fn formula(common: &Common, asymptotic_only: bool) -> Result<ExitCode> {
    let variant = common.variant.context("--variant is required")?;
    let mut rows = Vec::new();
    for d in single(&common.d, "d")? {
        for p in single(&common.p, "p")? {
            if !asymptotic_only {
                let e = expected_decrease(variant, p, d)?;
                rows.push(exact_row(variant, d, p, RowMethod::Exact, Metric::PerIteration, e.value));
                let f = per_evaluation(variant, p, d)?;
                rows.push(exact_row(variant, d, p, RowMethod::Exact, Metric::PerEvaluation, f.value));
                for &c in &common.cores_model {
                    let w = parallel_per_work(p, d, c, variant)?;
                    rows.push(exact_row(variant, d, p, RowMethod::Exact, Metric::PerWork(c), w.value));
                }
            }
            if p <= 2 {
                let a = asymptotic_decrease(p, d, variant)?;
                rows.push(exact_row(variant, d, p, RowMethod::Asymptotic, Metric::PerIteration, a.value));
            }
        }
    }
    let spec = json!({ "command": "formula", "variant": variant, "d": common.d, "p": common.p, "cores_model": common.cores_model });
    Sink::new(common, "formula").write_rows(&rows, &spec)?;
    Ok(ExitCode::SUCCESS)
}

fn mc(common: &Common, full_basis: bool) -> Result<ExitCode> {
    let variant = common.variant.context("--variant is required")?;
    let n_sims = common.nsims.unwrap_or(DEFAULT_N_SIMS);
    let seed = common.seed.unwrap_or(0);
    let reduction = if full_basis { Reduction::FullBasis } else { Reduction::Reduced };
    let mut rows = Vec::new();
    for d in single(&common.d, "d")? {
        for p in single(&common.p, "p")? {
            let stream = subdfo::experiments::cell_stream(seed, 0, variant, d, p);
            let e = estimate(variant, p, d, n_sims, stream, reduction)?;
            let cost = subdfo::formulas::evaluation_cost(variant, p);
            for (metric, scale) in [(Metric::PerIteration, 1.0), (Metric::PerEvaluation, 1.0 / cost)] {
                rows.push(ResultRow {
                    variant,
                    d,
                    p,
                    method: RowMethod::Mc,
                    metric,
                    value: e.mean * scale,
                    std_error: Some(e.std_error * scale),
                    n_sims: Some(n_sims),
                    seed: Some(seed),
                });
            }
        }
    }
    let spec = json!({
        "command": "mc", "variant": variant, "d": common.d, "p": common.p,
        "n_sims": n_sims, "seed": seed, "full_basis": full_basis,
    });
    Sink::new(common, "mc").write_rows(&rows, &spec)?;
    Ok(ExitCode::SUCCESS)
}

/// Parameters of the `parallel-sweep` figure, also readable from a config file.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
struct SweepSpec {
    variants: Vec<Variant>,
    ds_d: usize,
    mb_d: usize,
    cores: Vec<usize>,
    p_multiples: usize,
    n_sims: usize,
    seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            variants: vec![Variant::Ds, Variant::Mb],
            ds_d: 64,
            mb_d: 128,
            cores: vec![1, 2, 4, 8],
            p_multiples: 100,
            n_sims: DEFAULT_N_SIMS,
            seed: 0,
        }
    }
}

fn figure(common: &Common, args: &FigureArgs) -> Result<ExitCode> {
    let config = match &args.config {
        Some(path) => Some(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?),
        None => None,
    };
    if args.name == "parallel-sweep" {
        let mut spec: SweepSpec = match &config {
            Some(text) => toml::from_str(text).context("parsing sweep config")?,
            None => SweepSpec::default(),
        };
        if let Some(v) = common.variant {
            spec.variants = vec![v];
        }
        if let [d] = common.d[..] {
            spec.ds_d = d;
            spec.mb_d = d;
        } else if common.d.len() > 1 {
            bail!("parallel-sweep takes a single --d");
        }
        if !common.cores_model.is_empty() {
            spec.cores = common.cores_model.clone();
        }
        if let Some(m) = args.p_multiples {
            spec.p_multiples = m;
        }
        spec.n_sims = common.nsims.unwrap_or(spec.n_sims);
        spec.seed = common.seed.unwrap_or(spec.seed);
        let mut rows = Vec::new();
        for &variant in &spec.variants {
            let d = if variant == Variant::Ds { spec.ds_d } else { spec.mb_d };
            let (r, summaries) = run_parallel_sweep(variant, d, &spec.cores, spec.p_multiples, spec.n_sims, spec.seed)?;
            rows.extend(r);
            for s in summaries {
                eprintln!("{} d={} c={}: argmax p={} maximizers {:?} value {:.6e}", s.variant, s.d, s.cores, s.argmax_p, s.tied_p, s.max_value);
            }
        }
        Sink::new(common, "parallel-sweep").write_rows(&rows, &json!({ "command": "figure", "spec": spec }))?;
        return Ok(ExitCode::SUCCESS);
    }

    let mut spec = match &config {
        Some(text) => toml::from_str::<ExperimentSpec>(text).context("parsing experiment config")?,
        None => ExperimentSpec::named(&args.name)?,
    };
    if config.is_some() {
        spec.name = args.name.clone();
    }
    if let Some(v) = common.variant {
        spec.variant = v;
    }
    if !common.d.is_empty() {
        spec.d_values = common.d.clone();
    }
    if !common.p.is_empty() {
        spec.p_rule = PRule::List(common.p.clone());
    }
    if let Some(n) = common.nsims {
        spec.n_sims = n;
    }
    if let Some(s) = common.seed {
        spec.seed = s;
    }
    if args.no_mc || args.no_formula || args.no_asymptotic {
        spec.include = Include {
            formula: spec.include.formula && !args.no_formula,
            monte_carlo: spec.include.monte_carlo && !args.no_mc,
            asymptotic: spec.include.asymptotic && !args.no_asymptotic,
        };
    }
    let rows = run_experiment(&spec)?;
    Sink::new(common, &spec.name).write_rows(&rows, &json!({ "command": "figure", "spec": spec }))?;
    Ok(ExitCode::SUCCESS)
}

fn optimize(common: &Common, args: &OptimizeArgs) -> Result<ExitCode> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<DriverConfig>(&text).context("parsing driver config")?
        }
        None => DriverConfig::default(),
    };
    if let [p] = common.p[..] {
        config.p = p;
    }
    if let Some(kind) = args.kind {
        config.iteration_kind = kind;
    } else if args.config.is_none() {
        if let Some(Variant::Mb) = common.variant {
            config.iteration_kind = subdfo::dfo::IterationKind::Mb;
        }
    }
    if let Some(b) = args.budget {
        config.max_evaluations = b;
    }
    if let Some(s) = args.initial_step {
        config.initial_step = s;
    }
    if let Some(s) = args.expand {
        config.expand_factor = s;
    }
    if let Some(s) = args.contract {
        config.contract_factor = s;
    }
    if let Some(s) = args.min_step {
        config.min_step = s;
    }
    let d = match common.d[..] {
        [d] => d,
        [] => bail!("--d is required"),
        _ => bail!("optimize takes a single --d"),
    };
    let seed = common.seed.unwrap_or(0);
    let root = RngStream::new(seed);
    let (objective, x0) = named(&args.function, d, root.split(1))?;
    let handle = ObjectiveHandle::new(objective);
    let trace = run_driver(&handle, &x0, &config, root.split(2))?;
    eprintln!(
        "{}: {} iterations, {} evaluations, best value {:.6e}",
        args.function,
        trace.rows.len() - 1,
        handle.eval_count(),
        trace.best_value()
    );
    let body = match common.format {
        Format::Csv => trace.to_csv(),
        Format::Json => serde_json::to_string_pretty(&trace)? + "\n",
    };
    let spec = json!({ "command": "optimize", "function": args.function, "d": d, "seed": seed, "config": config });
    Sink::new(common, &format!("optimize-{}", args.function)).write_text(&body, &spec)?;
    Ok(ExitCode::SUCCESS)
}

fn verify(common: &Common) -> Result<ExitCode> {
    let cfg = VerifyConfig { seed: common.seed.unwrap_or(0), n_sims: common.nsims.unwrap_or(DEFAULT_N_SIMS) };
    let report = run_all(&cfg)?;
    for gate in &report.gates {
        eprintln!("{}", gate.summary());
    }
    let rows = report.rows();
    let spec = json!({ "command": "verify", "config": cfg, "gates": report.gates });
    Sink::new(common, "verify").write_rows(&rows, &spec)?;
    if report.passed() {
        eprintln!("all gates passed");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} gate(s) failed", report.gates.iter().filter(|g| !g.passed).count());
        Ok(ExitCode::FAILURE)
    }
}
