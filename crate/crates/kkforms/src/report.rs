//! The JSON suite report.
//!
//! Layout (schema version [`SCHEMA_VERSION`]):
//!
//! ```text
//! {
//!   "schema_version": 1,
//!   "tool": { "name": "kkforms", "version": "..." },
//!   "config": { "family", "params", "eps_d", "points", "seed", "tolerance" },
//!   "pass": bool,
//!   "solutions": [
//!     { "label", "family", "params", "dim", "eps_d", "wall_clock_s", "pass",
//!       "error"?, "equations": { "<id>": { "points", "seed", "max_abs",
//!       "mean_abs", "max_rel", "mean_rel", "tolerance", "pass", "note"? } } }
//!   ]
//! }
//! ```
//!
//! `wall_clock_s` is the only field that differs between identical runs.

use std::collections::BTreeMap;

use kkforms_core::verify::ResidualReport;
use serde::Serialize;

use crate::config::ConfigEcho;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") }
    }
}

/// One equation over the point sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationReport {
    pub points: usize,
    pub seed: u64,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&ResidualReport> for EquationReport {
    fn from(r: &ResidualReport) -> Self {
        Self {
            points: r.points,
            seed: r.seed,
            max_abs: r.max_abs,
            mean_abs: r.mean_abs,
            max_rel: r.max_rel,
            mean_rel: r.mean_rel,
            tolerance: r.tolerance,
            pass: r.pass,
            note: r.note.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionReport {
    pub label: String,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub dim: usize,
    pub eps_d: f64,
    pub wall_clock_s: f64,
    pub pass: bool,
    /// Set when evaluation stopped early, for instance at a degenerate point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub equations: BTreeMap<String, EquationReport>,
}

impl SolutionReport {
    /// Worst relative residual and its equation id.
    pub fn worst(&self) -> Option<(&str, f64)> {
        self.equations.iter().map(|(id, r)| (id.as_str(), r.max_rel)).fold(None, |acc, (id, v)| match acc {
            Some((_, w)) if w >= v => acc,
            _ => Some((id, v)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub config: ConfigEcho,
    pub pass: bool,
    pub solutions: Vec<SolutionReport>,
}

impl SuiteReport {
    pub fn new(config: ConfigEcho, solutions: Vec<SolutionReport>) -> Self {
        let pass = !solutions.is_empty() && solutions.iter().all(|s| s.pass);
        Self { schema_version: SCHEMA_VERSION, tool: ToolInfo::current(), config, pass, solutions }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// One line per solution for a terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.solutions {
            let verdict = if s.pass { "PASS" } else { "FAIL" };
            let worst = match (&s.error, s.worst()) {
                (Some(e), _) => format!("error: {e}"),
                (None, Some((id, v))) => format!("worst {id} {v:.3e}"),
                (None, None) => "no equations".into(),
            };
            out.push_str(&format!("{verdict} {} ({worst})\n", s.label));
        }
        out.push_str(&format!("overall {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}
