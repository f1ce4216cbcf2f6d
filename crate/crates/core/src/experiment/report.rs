use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentError, ExperimentKind, Tolerances};

/// Report cell. Floats are rounded to 12 significant digits when the cell is
/// built, so the CSV and JSON forms carry the same value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Int(i64),
    Num(f64),
    Text(String),
}

pub fn round_sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

impl Cell {
    pub fn num(v: f64) -> Cell {
        if v.is_finite() {
            Cell::Num(round_sig(v) + 0.0)
        } else if v.is_nan() {
            Cell::Text("nan".into())
        } else if v > 0.0 {
            Cell::Text("inf".into())
        } else {
            Cell::Text("-inf".into())
        }
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn int(v: usize) -> Cell {
        Cell::Int(v as i64)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(s) => match s.as_str() {
                "nan" => Some(f64::NAN),
                "inf" => Some(f64::INFINITY),
                "-inf" => Some(f64::NEG_INFINITY),
                _ => None,
            },
            Cell::Bool(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Cell::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn to_field(&self) -> String {
        match self {
            Cell::Bool(b) => b.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => {
                let a = v.abs();
                if a == 0.0 || (1e-4..1e15).contains(&a) {
                    format!("{v}")
                } else {
                    format!("{v:e}")
                }
            }
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::text(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub experiment: ExperimentKind,
    pub space: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub header: ReportHeader,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: BTreeMap<String, Cell>,
    /// Samples that raised an error and were left out of `rows`.
    pub failures: usize,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn summary_f64(&self, key: &str) -> Option<f64> {
        self.summary.get(key).and_then(Cell::as_f64)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, ExperimentError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_field))?;
        }
        w.into_inner().map_err(|e| ExperimentError::Io(e.into_error()))
    }

    pub fn to_json(&self) -> Result<String, ExperimentError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self, ExperimentError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

/// Writes `<prefix>.csv` or `<prefix>.json` and returns the path written.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, prefix: &Path) -> Result<PathBuf, ExperimentError> {
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut path = prefix.as_os_str().to_owned();
    match format {
        ReportFormat::Csv => {
            path.push(".csv");
            fs::write(&path, report.to_csv()?)?;
        }
        ReportFormat::Json => {
            path.push(".json");
            fs::write(&path, report.to_json()?)?;
        }
    }
    Ok(PathBuf::from(path))
}
