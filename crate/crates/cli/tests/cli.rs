use std::path::Path;
use std::process::{Command, Output};

fn subdfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdfo")).args(args).env_remove("SUBDFO_OUT_DIR").output().expect("spawn subdfo")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

const HEADER: &str = "variant,d,p,method,metric,value,std_error,n_sims,seed";

#[test]
fn formula_prints_closed_form() {
    let text = stdout(&subdfo(&["formula", "--variant", "mb", "--d", "8", "--p", "8"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    assert_eq!(lines.next(), Some("mb,8,8,exact,per-iteration,1.0000000000000000e0,,,"));
}

#[test]
fn formula_rejects_unsupported_depth() {
    let out = subdfo(&["formula", "--variant", "ds", "--d", "100", "--p", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn mc_rows_carry_standard_errors() {
    let text = stdout(&subdfo(&["mc", "--variant", "ds", "--d", "32", "--p", "2", "--nsims", "3000", "--seed", "5"]));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..5], &["ds", "32", "2", "mc", "per-iteration"]);
    let value: f64 = row[5].parse().unwrap();
    let se: f64 = row[6].parse().unwrap();
    assert!(value > 0.0 && value <= 1.0 && se > 0.0);
    assert_eq!(&row[7..], &["3000", "5"]);
}

#[test]
fn figure_config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("spec.toml");
    std::fs::write(
        &config,
        "name = \"custom\"\nvariant = \"mb\"\nd_values = [16, 32]\np_rule = \"standard\"\nn_sims = 500\nseed = 3\noutputs = \"both\"\n",
    )
    .unwrap();
    let out = dir.path().join("nested/custom.csv");
    let args = ["figure", "mb-vary-d", "--config", config.to_str().unwrap(), "--d", "16", "--out", out.to_str().unwrap()];
    stdout(&subdfo(&args));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with(HEADER));
    assert!(csv.lines().skip(1).all(|l| l.starts_with("mb,16,")));
    assert!(csv.contains(",per-evaluation,"));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("nested/custom.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["spec"]["spec"]["n_sims"], 500);
    assert_eq!(manifest["spec"]["spec"]["d_values"], serde_json::json!([16]));
    assert!(manifest["version"].is_string() && manifest["timestamp"].is_u64());
}

#[test]
fn figure_respects_output_dir_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_subdfo"))
        .args(["figure", "ds-vary-d", "--nsims", "200", "--d", "8,16", "--format", "json"])
        .env("SUBDFO_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let path = dir.path().join("ds-vary-d.json");
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["variant"] == "ds"));
    assert!(rows.iter().any(|r| r["method"] == "asymptotic" && r["std_error"].is_null()));
    assert!(Path::new(&format!("{}.manifest.json", path.display())).exists());
}

#[test]
fn figures_are_reproducible() {
    let args = ["figure", "mb-perfev-vary-p", "--nsims", "300", "--p", "1,2,5,50"];
    assert_eq!(stdout(&subdfo(&args)), stdout(&subdfo(&args)));
}

#[test]
fn parallel_sweep_reports_argmax() {
    let out = subdfo(&["figure", "parallel-sweep", "--variant", "mb", "--d", "32", "--cores-model", "2,4", "--nsims", "100"]);
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.contains(",per-work(")));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mb d=32 c=2: argmax p=2 maximizers [2, 4]"), "{err}");
    assert!(err.contains("mb d=32 c=4: argmax p=4"), "{err}");
}

#[test]
fn optimize_writes_trace() {
    let text = stdout(&subdfo(&["optimize", "--function", "linear-random-g", "--d", "50", "--p", "1", "--budget", "200"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("iteration,eval_count,best_value,step_size"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));

    let zero = stdout(&subdfo(&["optimize", "--function", "sphere-quadratic", "--d", "4", "--budget", "0"]));
    assert_eq!(zero.lines().count(), 2);
}

#[test]
fn optimize_reads_driver_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("driver.toml");
    std::fs::write(&config, "p = 2\niteration_kind = \"mb\"\nmax_evaluations = 2000\n").unwrap();
    let text = stdout(&subdfo(&["optimize", "--function", "sphere-quadratic", "--d", "20", "--config", config.to_str().unwrap()]));
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    let (first, last) = (&rows[0], rows.last().unwrap());
    assert!(last[2] < 0.01 * first[2]);
    // p + 1 = 3 evaluations per iteration
    assert_eq!((last[1] - 1.0) / last[0], 3.0);
}

#[test]
fn unknown_function_fails() {
    let out = subdfo(&["optimize", "--function", "himmelblau", "--d", "2"]);
    assert!(!out.status.success());
}
