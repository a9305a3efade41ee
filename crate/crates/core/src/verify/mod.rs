//! Pointwise residual evaluators and their aggregation into reports.
//!
//! Every evaluator returns [`Residual`]s: the residual components at one point
//! together with the natural magnitude of the terms that enter them. The
//! relative residual divides the largest component by that magnitude, floored
//! at [`SCALE_FLOOR`]. Derivative terms count the connection pieces of a
//! covariant derivative separately, so an identically vanishing `D F` built
//! from large partials and large Christoffels is judged against their size.
//!
//! [`ResidualReport`] folds per-point residuals into max/mean statistics.

mod forms;
mod geometry;
mod gj;
mod kink;
mod sample;
mod structure;
pub mod suite;

use alloc::string::String;
use alloc::vec::Vec;

use crate::tensor::{TensorValue, Valence};

pub use forms::{fundamental_forms, FundamentalForms};
pub use geometry::PointGeometry;
pub use gj::{
    bianchi_residual, curvature_identity_residual, estimate_k, gj_residual, killing_check, traceless_kink_residual,
    CurvatureIdentities, GJEquationSet, KEstimate, KillingCheck, TracelessKink,
};
pub use kink::{ckink_ode_residual, kink_ode_residual, CKinkConstants, CKinkOdeResidual, KinkOdeResidual};
pub use sample::sample_points;
pub use structure::{structure_residual, structure_residual_with, StructureResidual};

/// Lower bound for relative-residual denominators.
pub const SCALE_FLOOR: f64 = 1e-30;

/// Residual components at one point and the magnitude they are judged against.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub tensor: TensorValue,
    pub scale: f64,
}

impl Residual {
    pub fn new(tensor: TensorValue, scale: f64) -> Self {
        Self { tensor, scale }
    }

    pub fn scalar(value: f64, scale: f64) -> Self {
        let t = TensorValue::from_data(Valence::new(0, 0), 1, alloc::vec![value]).expect("one entry");
        Self { tensor: t, scale }
    }

    /// Largest component magnitude.
    pub fn abs(&self) -> f64 {
        self.tensor.max_abs()
    }

    pub fn rel(&self) -> f64 {
        self.abs() / self.scale.max(SCALE_FLOOR)
    }

    pub fn sample(&self) -> PointResidual {
        PointResidual { abs: self.abs(), rel: self.rel() }
    }
}

/// Absolute and relative residual of one equation at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResidual {
    pub abs: f64,
    pub rel: f64,
}

/// Statistics of one equation over a point sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub equation: String,
    pub points: usize,
    pub seed: u64,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl ResidualReport {
    /// Fold per-point residuals; passes iff the worst relative residual is
    /// within `tolerance`. An empty sample never passes.
    pub fn from_samples(
        equation: impl Into<String>,
        seed: u64,
        tolerance: f64,
        samples: impl IntoIterator<Item = PointResidual>,
    ) -> Self {
        let mut n = 0usize;
        let (mut max_abs, mut sum_abs, mut max_rel, mut sum_rel) = (0.0f64, 0.0, 0.0f64, 0.0);
        let mut finite = true;
        for s in samples {
            n += 1;
            finite &= s.abs.is_finite() && s.rel.is_finite();
            max_abs = max_abs.max(s.abs);
            max_rel = max_rel.max(s.rel);
            sum_abs += s.abs;
            sum_rel += s.rel;
        }
        let nf = n.max(1) as f64;
        Self {
            equation: equation.into(),
            points: n,
            seed,
            max_abs,
            mean_abs: sum_abs / nf,
            max_rel,
            mean_rel: sum_rel / nf,
            tolerance,
            pass: n > 0 && finite && max_rel <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Per-point residuals keyed by equation id, in evaluation order.
pub type PointResiduals = Vec<(&'static str, PointResidual)>;
