//! CSV, JSON and scatter-data emitters for scenario results.

use serde::{Deserialize, Serialize};

use crate::agents::DecisionMakerMode;
use crate::error::{Error, Result};
use crate::runner::{RunConfig, ScenarioResult};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const CSV_COLUMNS: [&str; 13] = [
    "scenario",
    "mode",
    "split",
    "n",
    "k",
    "trials",
    "master_seed",
    "poo",
    "poo_ci_low",
    "poo_ci_high",
    "mean_fitness_rate",
    "fitness_rate_se",
    "mean_fitness_diff",
];

pub const SCATTER_COLUMNS: [&str; 4] = ["scenario", "mode", "poo", "mean_fitness_rate"];

/// One scenario result flattened to scalar columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario: String,
    pub mode: DecisionMakerMode,
    pub split: String,
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub poo: f64,
    pub poo_ci_low: f64,
    pub poo_ci_high: f64,
    pub mean_fitness_rate: f64,
    pub fitness_rate_se: f64,
    pub mean_fitness_diff: f64,
    pub confidence: f64,
    pub weights: Vec<f64>,
}

impl From<&ScenarioResult> for ReportRow {
    fn from(r: &ScenarioResult) -> Self {
        Self {
            scenario: r.code.clone(),
            mode: r.mode,
            split: format!("{}-{}", r.split.0, r.split.1),
            n: r.n,
            k: r.k,
            trials: r.trials,
            master_seed: r.master_seed,
            poo: r.poo,
            poo_ci_low: r.poo_ci.0,
            poo_ci_high: r.poo_ci.1,
            mean_fitness_rate: r.mean_fitness_rate,
            fitness_rate_se: r.fitness_rate_se,
            mean_fitness_diff: r.mean_fitness_diff,
            confidence: r.confidence,
            weights: r.weights.clone(),
        }
    }
}

/// Six decimals; exact ties round half to even.
pub fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

fn non_empty(rows: &[ReportRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Usage("no scenario results to report".into()));
    }
    Ok(())
}

pub fn emit_csv(rows: &[ReportRow]) -> Result<String> {
    non_empty(rows)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.mode.to_string(),
            r.split.clone(),
            r.n.to_string(),
            r.k.to_string(),
            r.trials.to_string(),
            r.master_seed.to_string(),
            fixed6(r.poo),
            fixed6(r.poo_ci_low),
            fixed6(r.poo_ci_high),
            fixed6(r.mean_fitness_rate),
            fixed6(r.fitness_rate_se),
            fixed6(r.mean_fitness_diff),
        ])
        .map_err(csv_err)?;
    }
    into_text(w)
}

/// Points for a PoO vs. fitness-rate scatter plot, one per scenario.
pub fn emit_scatter_data(rows: &[ReportRow]) -> Result<String> {
    non_empty(rows)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(SCATTER_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.mode.to_string(),
            fixed6(r.poo),
            fixed6(r.mean_fitness_rate),
        ])
        .map_err(csv_err)?;
    }
    into_text(w)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub artifact_version: String,
    pub trials: u64,
    pub master_seed: u64,
    pub confidence: f64,
    pub rows: Vec<ReportRow>,
}

pub fn emit_json(rows: &[ReportRow], config: &RunConfig) -> Result<String> {
    non_empty(rows)?;
    let doc = JsonReport {
        artifact_version: ARTIFACT_VERSION.to_string(),
        trials: config.trials,
        master_seed: config.master_seed,
        confidence: config.confidence,
        rows: rows.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Domain(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn parse_json_report(text: &str) -> Result<JsonReport> {
    Ok(serde_json::from_str(text)?)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Domain(format!("csv: {other:?}")),
    }
}

fn into_text(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
