//! Report rows and their CSV/JSON serialization.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cli::config::ExperimentConfig;
use crate::error::{Error, Result};

/// One output row. The first ten columns are fixed; the rest carry the level
/// plan, fit results and check outcomes where they apply.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReportRow {
    pub estimator: String,
    pub n: Option<u64>,
    pub alpha: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub x0: f64,
    pub c_n: Option<f64>,
    pub reps: usize,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub seed: u64,
    pub function: String,
    pub basis: String,
    pub row_kind: String,
    #[serde(rename = "J")]
    pub j: Option<usize>,
    #[serde(rename = "J_star")]
    pub j_star: Option<usize>,
    #[serde(rename = "J_upper")]
    pub j_upper: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub card_hstar: Option<usize>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

impl Report {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        let json_path = dir.join(format!("{}.json", self.name));
        std::fs::write(&csv_path, self.to_csv()?).map_err(|e| io_error(&csv_path, e))?;
        std::fs::write(&json_path, self.to_json()? + "\n").map_err(|e| io_error(&json_path, e))?;
        Ok((csv_path, json_path))
    }

    /// Fixed-width summary for the terminal.
    pub fn table(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4e}"));
        let mut s = format!(
            "{:<22} {:<20} {:<22} {:>8} {:>10} {:>11} {:>11} {:>8}\n",
            "row", "estimator", "function", "n", "c_n", "mean/slope", "stderr/bnd", "pass"
        );
        for r in &self.rows {
            let (a, b) = if r.slope.is_some() {
                (fmt(r.slope), fmt(r.r_squared))
            } else if r.bound.is_some() {
                (fmt(r.mean), fmt(r.bound))
            } else {
                (fmt(r.mean), fmt(r.stderr))
            };
            s.push_str(&format!(
                "{:<22} {:<20} {:<22} {:>8} {:>10} {:>11} {:>11} {:>8}\n",
                r.row_kind,
                r.estimator,
                r.function,
                r.n.map_or("-".into(), |n| n.to_string()),
                r.c_n.map_or("-".into(), |c| format!("{c:.4}")),
                a,
                b,
                r.pass.map_or("-".into(), |p| if p { "ok" } else { "FAIL" }.to_string()),
            ));
        }
        s
    }
}
