//! Every check that applies to a catalog instance, evaluated point by point.
//!
//! Equation ids are stable strings grouped by prefix: `gj.*` for the
//! conformal-flatness conditions, `identity.*` for the curvature identities
//! at the asserted `k`, `structure.*` for the (para-)complex structure of a
//! Kähler factor, `kink.*` and `ckink.*` for the two-dimensional system,
//! `forms.*` for the fundamental forms of a block metric and `lift.weyl` for
//! the lifted metric.

use alloc::vec::Vec;

use crate::catalog::SolutionInstance;
use crate::error::Result;
use crate::field::SmoothField;
use crate::lift::{lift, LiftedMetric};
use crate::tensor::ChartPoint;

use super::forms::fundamental_forms;
use super::geometry::PointGeometry;
use super::gj::{bianchi_from, curvature_identities_from, gj_from, killing_from, traceless_kink_from};
use super::kink::{ckink_ode_residual, kink_ode_residual, CKinkConstants};
use super::structure::structure_residual_with;
use super::{PointResidual, PointResiduals, Residual, ResidualReport};

/// Which optional groups to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub lift: bool,
    pub bianchi: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { lift: true, bianchi: true }
    }
}

/// Prepared checks for one instance.
pub struct InstanceChecks<'a> {
    inst: &'a SolutionInstance,
    g: SmoothField,
    lifted: Option<LiftedMetric>,
    opts: CheckOptions,
}

fn pass_fail(ok: bool) -> PointResidual {
    let v = if ok { 0.0 } else { 1.0 };
    PointResidual { abs: v, rel: v }
}

impl<'a> InstanceChecks<'a> {
    pub fn new(inst: &'a SolutionInstance, opts: CheckOptions) -> Result<Self> {
        let lifted = if opts.lift { Some(lift(&inst.g, &inst.a, inst.expected.eps_d)?) } else { None };
        Ok(Self { inst, g: inst.normalized_metric(), lifted, opts })
    }

    pub fn instance(&self) -> &SolutionInstance {
        self.inst
    }

    /// All residuals at `p`, in a fixed order.
    pub fn at(&self, p: &ChartPoint) -> Result<PointResiduals> {
        let inst = self.inst;
        let k = inst.expected.k;
        let mut out: PointResiduals = Vec::new();
        let mut push = |id: &'static str, r: &Residual| out.push((id, r.sample()));

        let geo = PointGeometry::new(&self.g, &inst.a, p, 2, 3)?;
        let gj = gj_from(&geo)?;
        push("gj.weyl", &gj.weyl);
        push("gj.ricci", &gj.ricci);
        push("gj.field", &gj.field);
        let ids = curvature_identities_from(&geo, k)?;
        push("identity.riemann", &ids.riemann);
        push("identity.ricci", &ids.ricci);
        push("identity.scalar", &ids.scalar);
        let tk = traceless_kink_from(&geo, k)?;
        push("traceless", &tk.traceless);
        push("kink_equation", &tk.kink);
        push("killing", &killing_from(&geo)?.residual);
        if self.opts.bianchi {
            push("bianchi", &bianchi_from(&geo, k)?);
        }

        if let Some(kf) = &inst.kahler {
            let r = kf.g.dim();
            let q = ChartPoint::new(p.coords()[..r].to_vec())?;
            let st = structure_residual_with(&kf.g, &kf.potential, kf.sigma, kf.holomorphic, &q)?;
            push("structure.square", &st.square);
            push("structure.hermitian", &st.hermitian);
            push("structure.parallel", &st.parallel);
            push("structure.holomorphic", &st.holomorphic);
            let index_ok = if kf.sigma > 0.0 { st.signature_index % 2 == 0 } else { 2 * st.signature_index == r };
            out.push(("structure.index", pass_fail(index_ok)));
        }

        if let Some(kd) = &inst.kink {
            let q = ChartPoint::new(p.coords()[..2].to_vec())?;
            match &kd.centrifugal {
                None => {
                    let ode = kink_ode_residual(&kd.g2, &*kd.phi, kd.k, kd.sigma, &q)?;
                    out.push(("kink.curvature", ode.curvature.sample()));
                    out.push(("kink.field", ode.field.sample()));
                    out.push(("kink.hessian", ode.hessian.sample()));
                }
                Some(c) => {
                    let consts = CKinkConstants {
                        k: kd.k,
                        l2: c.l2,
                        tau: c.tau,
                        sigma: kd.sigma,
                        big_k: c.big_k,
                        big_l: c.big_l,
                        branch: if inst.expected.eps_d > 0.0 { 1.0 } else { -1.0 },
                    };
                    let ck = ckink_ode_residual(&kd.g2, &*kd.phi, &consts, &*c.lambda, &q)?;
                    out.push(("ckink.curvature", ck.ode.curvature.sample()));
                    out.push(("ckink.field", ck.ode.field.sample()));
                    out.push(("ckink.hessian", ck.ode.hessian.sample()));
                    out.push(("ckink.warp", ck.warp.sample()));
                    out.push(("ckink.constants", ck.constants.sample()));
                }
            }
        }

        if let Some(block) = &inst.block {
            let ff = fundamental_forms(block, &inst.a, p)?;
            out.push(("forms.umbilicity", ff.umbilicity.sample()));
            if let Some(t) = &ff.trace {
                out.push(("forms.trace", t.sample()));
            }
            if let Some(gf) = &ff.gauge_form {
                out.push(("forms.gauge", gf.sample()));
            }
            if let (Some(lm), Some(l2)) = (ff.l_measured, inst.expected.l2) {
                let rel = libm::fabs(lm * lm - l2) / libm::fabs(l2).max(lm * lm).max(super::SCALE_FLOOR);
                out.push((
                    "forms.l",
                    PointResidual {
                        abs: libm::fabs(lm * lm - l2),
                        rel: if l2 == 0.0 && lm == 0.0 { 0.0 } else { rel },
                    },
                ));
            }
        }

        if let Some(lifted) = &self.lifted {
            out.push(("lift.weyl", lifted.weyl_at(p)?.sample()));
        }
        Ok(out)
    }
}

/// Fold per-point residual lists into one report per equation, in the order
/// equations first appear.
pub fn aggregate(per_point: &[PointResiduals], seed: u64, tolerance: f64) -> Vec<ResidualReport> {
    let mut ids: Vec<&'static str> = Vec::new();
    for pr in per_point {
        for (id, _) in pr {
            if !ids.contains(id) {
                ids.push(id);
            }
        }
    }
    ids.iter()
        .map(|id| {
            let samples = per_point.iter().flat_map(|pr| pr.iter().filter(|(i, _)| i == id).map(|(_, s)| *s));
            ResidualReport::from_samples(*id, seed, tolerance, samples)
        })
        .collect()
}

/// Sequential run over `points`.
pub fn run(inst: &SolutionInstance, points: &[ChartPoint], seed: u64, tolerance: f64) -> Result<Vec<ResidualReport>> {
    let checks = InstanceChecks::new(inst, CheckOptions::default())?;
    let per_point = points.iter().map(|p| checks.at(p)).collect::<Result<Vec<_>>>()?;
    Ok(aggregate(&per_point, seed, tolerance))
}
