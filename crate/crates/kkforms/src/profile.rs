//! Kink profile tables: `ξ¹, φ, R, λ` along a line of the external chart.
//!
//! `φ` is the kink field, `R` the scalar curvature of the two-dimensional
//! external metric and `λ` the warp of the extra internal direction, all at
//! `ξ⁰ = 0` (and internal coordinate 0). Grid points the instance domain
//! excludes (the collar around the kink core, the centrifugal gap) are
//! omitted and counted.

use std::fmt::Write as _;

use kkforms_core::catalog::{build, ckink_gap_boundary, Family, Params, SolutionInstance};
use kkforms_core::curvature::curvature_bundle;
use kkforms_core::ChartPoint;

use crate::error::CliError;

pub const HEADER: &str = "xi1,phi,R,lambda";

/// Evenly spaced `ξ¹` values from `from` to `to` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self { from: -3.0, to: 3.0, step: 0.1 }
    }
}

impl Grid {
    /// Grid values, rounded to 1e-12 so that symmetric grids are exactly
    /// symmetric.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let Grid { from, to, step } = *self;
        if !(from.is_finite() && to.is_finite() && step.is_finite()) || !(step > 0.0) || !(from <= to) {
            return Err(CliError::config(format!(
                "profile grid needs from ≤ to and step > 0, got {from}..{to} by {step}"
            )));
        }
        let n = ((to - from) / step + 1e-9).floor() as usize;
        if n > 1_000_000 {
            return Err(CliError::config("profile grid has more than a million rows"));
        }
        Ok((0..=n).map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12 + 0.0).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub xi1: f64,
    pub phi: f64,
    pub r: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub label: String,
    pub rows: Vec<Row>,
    /// Grid points outside the instance domain.
    pub excluded: usize,
    /// `|ξ¹|` of the gap boundary on the centrifugal branch.
    pub gap_boundary: Option<f64>,
}

impl Profile {
    /// Comma-separated table with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{}", r.xi1, r.phi, r.r, r.lambda);
        }
        s
    }

    /// What was left out, for standard error.
    pub fn summary(&self) -> String {
        let mut s = format!("{}: {} rows, {} excluded by the domain", self.label, self.rows.len(), self.excluded);
        if let Some(b) = self.gap_boundary {
            let _ = write!(s, "; gap boundary |xi1| = {b}");
        }
        s
    }

    /// Largest entrywise difference of the common rows of two profiles,
    /// comparing `φ` up to sign.
    pub fn max_difference(&self, other: &Profile) -> Option<f64> {
        let mut worst: Option<f64> = None;
        for a in &self.rows {
            if let Some(b) = other.rows.iter().find(|b| b.xi1 == a.xi1) {
                let d = (a.phi.abs() - b.phi.abs()).abs().max((a.r - b.r).abs()).max((a.lambda - b.lambda).abs());
                worst = Some(worst.map_or(d, |w| w.max(d)));
            }
        }
        worst
    }
}

/// Profile of a `kink2` or `ckink3` instance.
pub fn profile(family: Family, params: &Params, grid: &Grid) -> Result<Profile, CliError> {
    if !matches!(family, Family::Kink2 | Family::CKink3) {
        return Err(CliError::config(format!("profiles exist for kink2 and ckink3, not {family}")));
    }
    let inst = build(family, params)?;
    profile_of(&inst, grid)
}

pub fn profile_of(inst: &SolutionInstance, grid: &Grid) -> Result<Profile, CliError> {
    let (Some(kink), Some(block)) = (&inst.kink, &inst.block) else {
        return Err(CliError::config(format!("{} has no kink profile", inst.label())));
    };
    let mut rows = Vec::new();
    let mut excluded = 0;
    for xi in grid.values()? {
        if !inst.domain.admits(&[0.0, xi, 0.0]) {
            excluded += 1;
            continue;
        }
        let p2 = ChartPoint::new(vec![0.0, xi])?;
        let mut phi = [0.0];
        kink.phi.eval_f64(p2.coords(), &mut phi);
        let r = curvature_bundle(&kink.g2, &p2)?.scalar;
        let lambda = block.parts_at(&ChartPoint::new(vec![0.0, xi, 0.0])?)?.warp;
        rows.push(Row { xi1: xi, phi: phi[0], r, lambda });
    }
    let gap_boundary = match (&kink.centrifugal, inst.params.get("tau")) {
        (Some(c), Some(tau)) if tau < 0.0 => Some(ckink_gap_boundary(c.big_k, c.big_l)),
        _ => None,
    };
    Ok(Profile { label: inst.label(), rows, excluded, gap_boundary })
}
