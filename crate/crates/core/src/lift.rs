//! The `d+1`-dimensional Kaluza-Klein metric
//!
//! ```text
//! ĝ = g_{μν} dx^μ dx^ν + ε (A_μ dx^μ + dx^d)²
//! ```
//!
//! and the check that its Weyl tensor vanishes. The lifted components are a
//! closed form over the base forms, so their jets come from the same dual
//! number sweep as the base jets.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::Connection;
use crate::error::{Error, Result};
use crate::field::{jet_eval, ClosedForm, ComponentFn, SmoothField};
use crate::scalar::Scalar;
use crate::tensor::{ChartPoint, Valence};
use crate::verify::{PointGeometry, Residual, ResidualReport};

/// Value of the extra coordinate at which lifted fields are sampled; any
/// value gives the same components.
pub const EXTRA_COORDINATE: f64 = 0.3;

struct LiftForm {
    g: Arc<dyn ComponentFn>,
    a: Arc<dyn ComponentFn>,
    eps: f64,
    d: usize,
}

impl ClosedForm for LiftForm {
    fn dim(&self) -> usize {
        self.d + 1
    }
    fn len(&self) -> usize {
        (self.d + 1) * (self.d + 1)
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let d = self.d;
        let n = d + 1;
        let mut g = vec![S::zero(); d * d];
        let mut a = vec![S::zero(); d];
        S::eval_field(&*self.g, &x[..d], &mut g);
        S::eval_field(&*self.a, &x[..d], &mut a);
        for m in 0..d {
            for k in 0..d {
                out[m * n + k] = g[m * d + k] + (a[m] * a[k]).scale(self.eps);
            }
            out[m * n + d] = a[m].scale(self.eps);
            out[d * n + m] = a[m].scale(self.eps);
        }
        out[d * n + d] = S::cst(self.eps);
    }
}

/// `ĝ_{μν} − ĝ_{μd} ĝ_{νd} / ĝ_{dd}` on the slice `x^d = 0`.
struct ReducedMetric {
    total: Arc<dyn ComponentFn>,
    d: usize,
}

/// `ĝ_{μd} / ĝ_{dd}` on the slice `x^d = 0`.
struct ReducedPotential {
    total: Arc<dyn ComponentFn>,
    d: usize,
}

fn total_at<S: Scalar>(total: &dyn ComponentFn, d: usize, x: &[S]) -> Vec<S> {
    let mut xs = x.to_vec();
    xs.push(S::zero());
    let mut out = vec![S::zero(); (d + 1) * (d + 1)];
    S::eval_field(total, &xs, &mut out);
    out
}

impl ClosedForm for ReducedMetric {
    fn dim(&self) -> usize {
        self.d
    }
    fn len(&self) -> usize {
        self.d * self.d
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let (d, n) = (self.d, self.d + 1);
        let t = total_at(&*self.total, d, x);
        let inv = t[d * n + d].recip();
        for m in 0..d {
            for k in 0..d {
                out[m * d + k] = t[m * n + k] - t[m * n + d] * t[k * n + d] * inv;
            }
        }
    }
}

impl ClosedForm for ReducedPotential {
    fn dim(&self) -> usize {
        self.d
    }
    fn len(&self) -> usize {
        self.d
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let (d, n) = (self.d, self.d + 1);
        let t = total_at(&*self.total, d, x);
        let inv = t[d * n + d].recip();
        for m in 0..d {
            out[m] = t[m * n + d] * inv;
        }
    }
}

/// A metric on `d+1` coordinates that does not depend on the last one.
#[derive(Clone, Debug)]
pub struct LiftedMetric {
    base: Option<(SmoothField, SmoothField)>,
    eps: f64,
    metric: SmoothField,
}

/// Kaluza-Klein lift of `(g, A)` with extra-coordinate signature `eps_d`.
/// Bases of dimension 2 are rejected: the conformal-flatness conditions need
/// `d ≥ 3`.
pub fn lift(g: &SmoothField, a: &SmoothField, eps_d: f64) -> Result<LiftedMetric> {
    if eps_d != 1.0 && eps_d != -1.0 {
        return Err(Error::InvalidParameter(format!("ε_d must be +1 or -1, got {eps_d}")));
    }
    if g.valence() != Valence::new(0, 2) || a.valence() != Valence::new(1, 0) {
        return Err(Error::Unsupported("lift needs a (0,2) metric and a covector potential".into()));
    }
    if a.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), got: a.dim() });
    }
    let d = g.dim();
    if d < 3 {
        return Err(Error::WeylDimension(d));
    }
    let form = LiftForm { g: g.component_fn().clone(), a: a.component_fn().clone(), eps: eps_d, d };
    let metric = SmoothField::from_form(Valence::new(0, 2), form)?;
    Ok(LiftedMetric { base: Some((g.clone(), a.clone())), eps: eps_d, metric })
}

impl LiftedMetric {
    /// Wrap an arbitrary `(d+1)`-dimensional metric, checking at `probes`
    /// (points of the full chart) that it does not depend on the last
    /// coordinate and that `ĝ_{dd} = ±1`.
    pub fn from_total(metric: SmoothField, probes: &[ChartPoint]) -> Result<Self> {
        if metric.valence() != Valence::new(0, 2) {
            return Err(Error::Unsupported("lifted metric must be a (0,2) field".into()));
        }
        let n = metric.dim();
        if probes.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut worst: f64 = 0.0;
        let mut eps = 0.0;
        for p in probes {
            let j = jet_eval(&metric, p, 1)?;
            for c in 0..j.len() {
                worst = worst.max(libm::fabs(j.first(n - 1, c)));
            }
            let gdd = j.value(n * n - 1);
            if libm::fabs(libm::fabs(gdd) - 1.0) > 1e-12 || (eps != 0.0 && gdd * eps < 0.0) {
                return Err(Error::Unsupported(format!("ĝ_dd must be a constant ±1, found {gdd}")));
            }
            eps = if gdd > 0.0 { 1.0 } else { -1.0 };
        }
        if worst > 0.0 {
            return Err(Error::DependsOnExtraCoordinate(worst));
        }
        Ok(Self { base: None, eps, metric })
    }

    pub fn eps_d(&self) -> f64 {
        self.eps
    }

    /// `ĝ` on `d+1` coordinates.
    pub fn metric(&self) -> &SmoothField {
        &self.metric
    }

    pub fn base_dim(&self) -> usize {
        self.metric.dim() - 1
    }

    /// Weyl components of `ĝ` over a base point, judged against the Riemann
    /// summand scale. In three dimensions the Weyl tensor vanishes
    /// identically and a zero residual is returned.
    pub fn weyl_at(&self, p: &ChartPoint) -> Result<Residual> {
        if p.dim() != self.base_dim() {
            return Err(Error::DimensionMismatch { expected: self.base_dim(), got: p.dim() });
        }
        let q = p.extended(EXTRA_COORDINATE);
        let conn = Connection::new(&self.metric, &q, 2)?;
        let n = conn.dim();
        let f = crate::tensor::Tensor::filled(Valence::new(2, 0), n, crate::jet::Jet::zero(n, 0));
        let geo = PointGeometry::from_parts(conn, f);
        let scale = geo.s.riemann();
        Ok(match &geo.weyl {
            Some(c) => Residual::new(c.clone(), scale),
            None => Residual::scalar(0.0, scale),
        })
    }
}

/// Weyl-vanishing report of a lifted metric over base points.
pub fn weyl_vanishing(
    lifted: &LiftedMetric,
    points: &[ChartPoint],
    seed: u64,
    tolerance: f64,
) -> Result<ResidualReport> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut samples = Vec::with_capacity(points.len());
    for p in points {
        samples.push(lifted.weyl_at(p)?.sample());
    }
    let report = ResidualReport::from_samples("lift.weyl", seed, tolerance, samples);
    Ok(if lifted.metric.dim() == 3 {
        report.with_note("the Weyl tensor vanishes identically in three dimensions")
    } else {
        report
    })
}

/// Recover `(g, A)`. Lifts built by [`lift`] return their base fields
/// unchanged; wrapped metrics are reduced on the slice `x^d = 0`.
pub fn reduce(lifted: &LiftedMetric) -> Result<(SmoothField, SmoothField)> {
    if let Some((g, a)) = &lifted.base {
        return Ok((g.clone(), a.clone()));
    }
    let d = lifted.base_dim();
    let total = lifted.metric.component_fn().clone();
    let g = SmoothField::from_form(Valence::new(0, 2), ReducedMetric { total: total.clone(), d })?;
    let a = SmoothField::from_form(Valence::new(1, 0), ReducedPotential { total, d })?;
    Ok((g, a))
}
