//! Serializable experiment reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sharpconst::limits::{DriverReport, ExtrapolationResult};

/// One degree of a sweep.
///
/// `wall_ms` is the only field that varies between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub raw: Option<f64>,
    pub scaled: Option<f64>,
    pub defect: Option<f64>,
    pub residual: Option<f64>,
    pub tol: f64,
    pub error: Option<String>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub error_estimate: Option<f64>,
    pub model: usize,
    pub residual: Option<f64>,
    pub limits_by_order: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub left_label: String,
    pub left: f64,
    pub right_label: String,
    pub right: f64,
    pub gap: f64,
    pub relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Option<f64>,
}

/// Everything an experiment produced, plus the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    /// Resolved configuration; feeding it back reproduces the run.
    pub config: BTreeMap<String, String>,
    pub gamma: f64,
    pub rows: Vec<ReportRow>,
    pub extrapolation: Option<Extrapolation>,
    pub comparison: Option<ComparisonRecord>,
    pub diagnostics: Vec<NamedValue>,
    pub notes: Vec<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn finite_opt(x: Option<f64>) -> Option<f64> {
    x.and_then(finite)
}

impl From<&ExtrapolationResult> for Extrapolation {
    fn from(e: &ExtrapolationResult) -> Self {
        Extrapolation {
            limit: e.limit,
            error_estimate: finite(e.error_estimate),
            model: e.model,
            residual: finite(e.residual),
            limits_by_order: e.limits_by_order.iter().copied().filter(|v| v.is_finite()).collect(),
        }
    }
}

impl Report {
    pub fn from_driver(experiment: &str, seed: u64, config: BTreeMap<String, String>, d: &DriverReport) -> Self {
        Report {
            experiment: experiment.to_string(),
            seed,
            config,
            gamma: d.series.gamma(),
            rows: d
                .rows
                .iter()
                .map(|r| ReportRow {
                    n: r.n,
                    raw: finite_opt(r.raw),
                    scaled: finite_opt(r.scaled),
                    defect: finite_opt(r.defect),
                    residual: finite_opt(r.residual),
                    tol: r.tol,
                    error: r.error.clone(),
                    wall_ms: r.wall_ms,
                })
                .collect(),
            extrapolation: d
                .extrapolation
                .as_ref()
                .filter(|e| e.limit.is_finite())
                .map(Extrapolation::from),
            comparison: d.comparison.as_ref().map(|c| ComparisonRecord {
                left_label: c.left_label.clone(),
                left: c.left,
                right_label: c.right_label.clone(),
                right: c.right,
                gap: c.gap,
                relative_gap: c.relative_gap,
            }),
            diagnostics: d
                .diagnostics
                .iter()
                .map(|g| NamedValue {
                    name: g.name.clone(),
                    value: finite(g.value),
                })
                .collect(),
            notes: d.notes.clone(),
        }
    }

    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.error.is_some())
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|d| d.name == name).and_then(|d| d.value)
    }

    /// The report with wall-clock fields zeroed, for run-to-run comparison.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for row in &mut r.rows {
            row.wall_ms = 0.0;
        }
        r
    }
}
