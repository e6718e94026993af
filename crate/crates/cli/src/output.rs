use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};
use subdfo::experiments::{rows_to_csv, ResultRow};

use crate::cli::Common;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Where a command's table goes: a file with its manifest, or stdout.
pub struct Sink {
    path: Option<PathBuf>,
    format: Format,
}

impl Sink {
    pub fn new(common: &Common, stem: &str) -> Self {
        let path = match (&common.out, &common.out_dir) {
            (Some(out), _) => Some(out.clone()),
            (None, Some(dir)) => Some(dir.join(format!("{stem}.{}", common.format.extension()))),
            (None, None) => None,
        };
        Self { path, format: common.format }
    }

    pub fn write_rows(&self, rows: &[ResultRow], spec: &Value) -> Result<()> {
        let body = match self.format {
            Format::Csv => rows_to_csv(rows),
            Format::Json => serde_json::to_string_pretty(&rows.iter().map(row_json).collect::<Vec<_>>())? + "\n",
        };
        self.write_text(&body, spec)
    }

    pub fn write_text(&self, body: &str, spec: &Value) -> Result<()> {
        let Some(path) = &self.path else {
            std::io::stdout().lock().write_all(body.as_bytes())?;
            return Ok(());
        };
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|t| t.as_secs()).unwrap_or(0);
        let manifest = json!({
            "spec": spec,
            "version": env!("CARGO_PKG_VERSION"),
            "timestamp": timestamp,
            "output": path.file_name().map(|n| n.to_string_lossy().into_owned()),
        });
        let mut manifest_path = path.clone().into_os_string();
        manifest_path.push(".manifest.json");
        fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")
            .with_context(|| format!("writing {}", PathBuf::from(&manifest_path).display()))?;
        eprintln!("wrote {}", path.display());
        Ok(())
    }
}

fn row_json(r: &ResultRow) -> Value {
    json!({
        "variant": r.variant,
        "d": r.d,
        "p": r.p,
        "method": r.method,
        "metric": r.metric.to_string(),
        "value": r.value,
        "std_error": r.std_error,
        "n_sims": r.n_sims,
        "seed": r.seed,
    })
}
