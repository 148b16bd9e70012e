//! Command-line driver for the `swe_fronts` scenarios.
//!
//! The binary is a thin layer over [`run_file`], [`sweep_file`] and
//! [`validate_criteria`]; everything here is usable from tests.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

pub mod config;
pub mod output;
pub mod scenarios;

use config::{parse_value, ScenarioConfig};
use output::{write_artifacts, Artifacts, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0} of 12 criteria failed")]
    Acceptance(usize),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Acceptance(_) => 1,
            CliError::Numerical(_) | CliError::Io { .. } => 2,
        }
    }
}

fn read_value(path: &Path) -> Result<toml::Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e: toml::de::Error| CliError::Config(vec![e.to_string().trim().to_string()]))
}

pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    parse_value(read_value(path)?)
}

fn strip_nulls(v: &mut serde_json::Value) {
    if let serde_json::Value::Object(m) = v {
        m.retain(|_, x| !x.is_null());
        m.values_mut().for_each(strip_nulls);
    }
}

fn echo(cfg: &ScenarioConfig) -> serde_json::Value {
    let mut v = serde_json::to_value(&cfg.raw).expect("config serializes");
    strip_nulls(&mut v);
    v
}

/// Run a config and write its artifacts. `out` overrides `output.dir`.
pub fn run_file(path: &Path, out: Option<&Path>, force_svg: bool) -> Result<(PathBuf, Artifacts), CliError> {
    let cfg = load(path)?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(&cfg.out_dir));
    let a = scenarios::run_plan(&cfg.plan)?;
    write_artifacts(&dir, cfg.raw.kind.name(), &echo(&cfg), &a, force_svg || cfg.raw.output.svg)?;
    if cfg.raw.kind == config::Kind::Validate {
        let failed = a.derived.iter().filter(|(k, v)| k.starts_with("criterion_") && **v == 0.0).count();
        if failed > 0 {
            return Err(CliError::Acceptance(failed));
        }
    }
    Ok((dir, a))
}

fn set_path(v: &mut toml::Value, key: &str, x: f64) -> Result<(), CliError> {
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = v;
    for (i, p) in parts.iter().enumerate() {
        let table = cur.as_table_mut().ok_or_else(|| CliError::Config(vec![format!("--param {key}: {p} is not a table")]))?;
        if i + 1 == parts.len() {
            table.insert(p.to_string(), toml::Value::Float(x));
            return Ok(());
        }
        cur = table.entry(p.to_string()).or_insert_with(|| toml::Value::Table(Default::default()));
    }
    Err(CliError::Config(vec!["--param must not be empty".into()]))
}

/// Sweep one scalar parameter, in parallel, and merge the derived values
/// into `sweep.tsv` in grid order. Failed points become NaN rows.
pub fn sweep_file(path: &Path, param: &str, grid: &[f64], out: Option<&Path>) -> Result<(PathBuf, Artifacts), CliError> {
    let base = read_value(path)?;
    let cfgs = grid
        .iter()
        .map(|&x| {
            let mut v = base.clone();
            set_path(&mut v, param, x)?;
            Ok(v)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let first = parse_value(cfgs[0].clone())?;
    let results: Vec<Result<Artifacts, CliError>> =
        cfgs.into_par_iter().map(|v| parse_value(v).and_then(|c| scenarios::run_plan(&c.plan))).collect();

    let keys: BTreeSet<String> = results.iter().flatten().flat_map(|a| a.derived.keys().cloned()).collect();
    let mut cols = vec![param.to_string()];
    cols.extend(keys.iter().cloned());
    let mut table = Table { columns: cols, rows: Vec::new() };
    let mut merged = Artifacts::default();
    for (&x, r) in grid.iter().zip(&results) {
        let mut row = vec![x];
        match r {
            Ok(a) => row.extend(keys.iter().map(|k| a.derived.get(k).copied().unwrap_or(f64::NAN))),
            Err(e) => {
                merged.notes.push(format!("{param} = {x}: {e}"));
                row.extend(keys.iter().map(|_| f64::NAN));
            }
        }
        table.push(row);
    }
    merged.set("points", grid.len() as f64);
    merged.set("failed", results.iter().filter(|r| r.is_err()).count() as f64);
    let series: Vec<output::Series> = keys.iter().map(|k| output::Series::from_table(&table, param, k, k.clone())).collect();
    merged.figure("sweep", output::svg_plot("sweep", param, "value", &series));
    merged.table("sweep", table);
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(&first.out_dir).join("sweep"));
    write_artifacts(&dir, "sweep", &echo(&first), &merged, first.raw.output.svg)?;
    Ok((dir, merged))
}

/// All acceptance criteria, in order.
pub fn validate_criteria() -> Vec<swe_fronts::validate::CriterionReport> {
    scenarios::validate_all(&mut Artifacts::default())
}
