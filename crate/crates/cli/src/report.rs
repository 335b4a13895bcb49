//! `report.json`: every check with its measured value and the threshold it
//! was judged against.

use std::fs;
use std::io;
use std::path::Path;

use igw_lab::conservation::{DriftReport, ResidualRecord};
use serde::Serialize;

use crate::config::{RunConfig, Task};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported but not asserted (the check's premise does not hold).
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// `null` when the quantity could not be computed (non-finite).
    pub measured: Option<f64>,
    pub relation: Relation,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::judge(name.into(), measured, Relation::AtMost, tolerance)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::judge(name.into(), measured, Relation::AtLeast, tolerance)
    }

    fn judge(name: String, measured: f64, relation: Relation, tolerance: f64) -> Self {
        let ok = match relation {
            Relation::AtMost => measured <= tolerance,
            Relation::AtLeast => measured >= tolerance,
        };
        Self {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            measured: measured.is_finite().then_some(measured),
            relation,
            tolerance,
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, measured: f64, tolerance: f64, why: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Skipped,
            measured: measured.is_finite().then_some(measured),
            relation: Relation::AtMost,
            tolerance,
            note: Some(why.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Time-stepping facts of a `simulate` run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunInfo {
    pub dt: f64,
    pub steps: usize,
    pub t_end: f64,
    /// Horizon within which the weighted integrals are asserted.
    pub trust_horizon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Abort {
    pub t: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub task: Task,
    pub seed: u64,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<ResidualRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort: Option<Abort>,
    pub passed: bool,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            tool: "igw-lab",
            version: env!("CARGO_PKG_VERSION"),
            task: config.task,
            seed: config.seed,
            config: config.clone(),
            run: None,
            checks: Vec::new(),
            residuals: Vec::new(),
            drift: None,
            abort: None,
            passed: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Recomputes `passed` from the checks and the abort state.
    pub fn finish(&mut self) {
        self.passed = self.abort.is_none() && !self.checks.iter().any(Check::failed);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is plain data");
        s.push('\n');
        s
    }

    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::write(dir.join("report.json"), self.to_json())
    }
}
