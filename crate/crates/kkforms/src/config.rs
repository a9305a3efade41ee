//! What to run: family selection, parameter assignments, sampling and
//! tolerance.

use std::collections::BTreeMap;
use std::path::PathBuf;

use kkforms_core::catalog::{default_grid, Family, Params};
use serde::Serialize;

use crate::error::CliError;

/// Parse `name=value` with a real value.
pub fn parse_param(s: &str) -> Result<(String, f64), CliError> {
    let (name, value) =
        s.split_once('=').ok_or_else(|| CliError::config(format!("parameter `{s}` is not of the form name=value")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(CliError::config(format!("parameter `{s}` has an empty name")));
    }
    let v: f64 =
        value.trim().parse().map_err(|_| CliError::config(format!("parameter `{name}`: `{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::config(format!("parameter `{name}` must be finite")));
    }
    Ok((name.to_string(), v))
}

/// Parse an extra-coordinate signature: `+1`, `1` or `-1`.
pub fn parse_sign(s: &str) -> Result<f64, CliError> {
    match s.trim() {
        "+1" | "1" | "+" => Ok(1.0),
        "-1" | "-" => Ok(-1.0),
        other => Err(CliError::config(format!("--eps-d must be +1 or -1, got `{other}`"))),
    }
}

/// Family selection: one family or the whole default grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    One(Family),
}

impl Selection {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Family::from_id(s).map(Selection::One).ok_or_else(|| {
            let ids: Vec<&str> = Family::ALL.iter().map(|f| f.id()).collect();
            CliError::config(format!("unknown family `{s}`; expected `all` or one of {}", ids.join(", ")))
        })
    }

    pub fn id(self) -> &'static str {
        match self {
            Selection::All => "all",
            Selection::One(f) => f.id(),
        }
    }
}

/// A verification run. Seed and tolerance are copied into every report.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub selection: Selection,
    pub params: Vec<(String, f64)>,
    pub points: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub eps_d: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            selection: Selection::All,
            params: Vec::new(),
            points: 50,
            seed: 42,
            tolerance: 1e-7,
            eps_d: None,
            out: None,
        }
    }
}

/// The part of a [`RunConfig`] echoed into reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub eps_d: Option<f64>,
    pub points: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl RunConfig {
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            family: self.selection.id().to_string(),
            params: self.params.iter().cloned().collect(),
            eps_d: self.eps_d,
            points: self.points,
            seed: self.seed,
            tolerance: self.tolerance,
        }
    }

    /// The `(family, parameters)` pairs to build. Without `--param` a family
    /// contributes its default grid rows; `--eps-d` overrides the branch of
    /// every row.
    pub fn targets(&self) -> Result<Vec<(Family, Params)>, CliError> {
        if self.points == 0 {
            return Err(CliError::config("--points must be at least 1"));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(CliError::config(format!("--tol must be positive and finite, got {}", self.tolerance)));
        }
        let mut seen = Vec::new();
        for (name, _) in &self.params {
            if seen.contains(name) {
                return Err(CliError::config(format!("parameter `{name}` given twice")));
            }
            seen.push(name.clone());
        }
        let rows: Vec<(Family, Params)> = match self.selection {
            Selection::All if !self.params.is_empty() => {
                return Err(CliError::config("--param needs a single --family"));
            }
            Selection::All => default_grid(),
            Selection::One(f) if self.params.is_empty() => {
                default_grid().into_iter().filter(|(g, _)| *g == f).collect()
            }
            Selection::One(f) => {
                let mut ps = Params::new();
                for (name, v) in &self.params {
                    ps.set(name, *v);
                }
                vec![(f, ps)]
            }
        };
        let Some(eps) = self.eps_d else { return Ok(rows) };
        rows.into_iter()
            .map(|(f, ps)| {
                if let Some(given) = ps.get("eps_d") {
                    if given != eps {
                        return Err(CliError::config(format!("--eps-d {eps} contradicts eps_d={given}")));
                    }
                }
                // grid rows drop their own branch; explicit ones are checked by the catalog
                let explicit = !self.params.is_empty();
                let mut out = Params::new();
                for (name, v) in ps.iter().filter(|(n, _)| explicit || *n != "anti") {
                    out.set(name, v);
                }
                out.set("eps_d", eps);
                Ok((f, out))
            })
            .collect()
    }
}
