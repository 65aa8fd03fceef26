use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::fnspace::ScalarFunction;

/// One pass/fail line of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Numbers and verdicts collected while a pipeline runs.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub max_residuals: BTreeMap<String, f64>,
    pub norms: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub diagnostics: BTreeMap<String, Value>,
    pub table: Option<Table>,
}

impl Outcome {
    /// `value <= threshold`; NaN fails.
    pub fn at_most(&mut self, name: &str, value: f64, threshold: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value,
            threshold,
            passed: value <= threshold,
        });
    }

    /// `|value - target| <= threshold`, recorded as the deviation.
    pub fn close_to(&mut self, name: &str, value: f64, target: f64, threshold: f64) {
        self.at_most(name, (value - target).abs(), threshold);
    }

    /// Residual stage: recorded in `max_residuals` and checked.
    pub fn residual(&mut self, stage: &str, value: f64, threshold: f64) {
        self.max_residuals.insert(stage.to_string(), value);
        self.at_most(&format!("residual.{stage}"), value, threshold);
    }

    pub fn norm(&mut self, name: &str, value: f64) {
        self.norms.insert(name.to_string(), value);
    }

    pub fn diag(&mut self, name: &str, value: impl Into<Value>) {
        self.diagnostics.insert(name.to_string(), value.into());
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {:e} (threshold {:e})", c.name, c.value, c.threshold))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Sampled curves, one column per function.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// `x` followed by each function on the grid; points outside a
    /// function's domain are written as NaN.
    pub fn sample(grid: &[f64], columns: &[(&str, &ScalarFunction<f64>)]) -> Self {
        let mut names = vec!["x".to_string()];
        names.extend(columns.iter().map(|(n, _)| n.to_string()));
        let rows = grid
            .iter()
            .map(|&x| {
                let mut row = vec![x];
                row.extend(columns.iter().map(|(_, f)| f.try_eval(x).unwrap_or(f64::NAN)));
                row
            })
            .collect();
        Self { columns: names, rows }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    s.push(',');
                }
                first = false;
                let _ = write!(s, "{}", fmt_num(*v));
            }
            s.push('\n');
        }
        s
    }
}

/// 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

pub const PASSED: &str = "PASSED";
pub const FAILED: &str = "FAILED";

/// JSON report. Field order is fixed by the struct; maps are sorted.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: String,
    pub pipeline: String,
    pub parameters: BTreeMap<String, Value>,
    pub max_residuals: BTreeMap<String, f64>,
    pub norms: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub diagnostics: BTreeMap<String, Value>,
    pub failures: Vec<String>,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn new(command: &str, pipeline: String, parameters: BTreeMap<String, Value>, outcome: &Outcome) -> Self {
        Self {
            command: command.to_string(),
            status: if outcome.passed() { PASSED } else { FAILED }.to_string(),
            pipeline,
            parameters,
            max_residuals: outcome.max_residuals.clone(),
            norms: outcome.norms.clone(),
            checks: outcome.checks.clone(),
            diagnostics: outcome.diagnostics.clone(),
            failures: outcome.failures(),
            outputs: Vec::new(),
            wall_time_seconds: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == PASSED
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes `text` to `dir/name`, creating `dir`.
pub fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}
