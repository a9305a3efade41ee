use alloc::vec;

use crate::curvature::Connection;
use crate::error::{Error, Result};
use crate::field::{jet_eval_fn, ComponentFn, SmoothField};
use crate::tensor::{ChartPoint, Tensor, Valence};

use super::geometry::{max_abs, partial_max};
use super::Residual;

/// Residuals of the two-dimensional kink system.
#[derive(Clone, Debug, PartialEq)]
pub struct KinkOdeResidual {
    /// `R − 2k − 3σφ² (− 3τl²/φ⁴)`
    pub curvature: Residual,
    /// `∇²φ + 2kφ + σφ³ (− τl²/φ³)`
    pub field: Residual,
    /// `∇_α∇_β φ − ½ g_{αβ} ∇²φ`
    pub hessian: Residual,
}

/// Scalar curvature, `φ`, `∇²φ` and the Hessian, with their scales.
struct Kink2 {
    r: f64,
    r_scale: f64,
    phi: f64,
    lap: f64,
    hess: [f64; 4],
    hess_scale: f64,
    g: [f64; 4],
    ginv_max: f64,
}

fn kink_pieces(g2: &SmoothField, phi: &dyn ComponentFn, p: &ChartPoint) -> Result<Kink2> {
    if g2.dim() != 2 || phi.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: g2.dim().max(phi.dim()) });
    }
    if phi.len() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: phi.len() });
    }
    let conn = Connection::new(g2, p, 2)?;
    let up = crate::curvature::values(&conn.riemann_up()?);
    let gv: [f64; 4] = core::array::from_fn(|i| conn.metric()[i].value());
    let gi: [f64; 4] = core::array::from_fn(|i| conn.inverse_metric()[i].value());
    let mut r = 0.0;
    for m in 0..2 {
        for n in 0..2 {
            let ric: f64 = (0..2).map(|k| up.get(&[k, m, n, k])).sum();
            r += gi[m * 2 + n] * ric;
        }
    }
    let gam = conn.christoffel_tensor();
    let (g0, g1) = (partial_max(gam.data(), 0), partial_max(gam.data(), 1));
    let r_scale = g1.max(g0 * g0) * max_abs(&gi);

    let fj = jet_eval_fn(phi, p.coords(), 2)?;
    let ph = fj.component(0);
    let mut hess = [0.0; 4];
    let mut hs: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let conn_part: f64 = (0..2).map(|c| conn.gamma(c, a, b).value() * ph.first(c)).sum();
            hess[a * 2 + b] = ph.second(a, b) - conn_part;
            hs = hs.max(libm::fabs(ph.second(a, b))).max(g0 * libm::fabs(ph.first(0)).max(libm::fabs(ph.first(1))));
        }
    }
    let lap: f64 = (0..4).map(|i| gi[i] * hess[i]).sum();
    Ok(Kink2 { r, r_scale, phi: ph.value(), lap, hess, hess_scale: hs, g: gv, ginv_max: max_abs(&gi) })
}

fn ode(k2: &Kink2, k: f64, sigma: f64, tau_l2: f64) -> Result<KinkOdeResidual> {
    let phi = k2.phi;
    let (pa, pb) = if tau_l2 != 0.0 {
        if phi == 0.0 {
            return Err(Error::Unsupported("the centrifugal term is singular where φ = 0".into()));
        }
        (-3.0 * tau_l2 / (phi * phi * phi * phi), -tau_l2 / (phi * phi * phi))
    } else {
        (0.0, 0.0)
    };
    let curv_terms = [k2.r_scale, libm::fabs(k2.r), 2.0 * libm::fabs(k), 3.0 * phi * phi, libm::fabs(pa)];
    let curvature = Residual::scalar(k2.r - 2.0 * k - 3.0 * sigma * phi * phi + pa, max_abs(&curv_terms));
    let lap_scale = k2.hess_scale * k2.ginv_max;
    let field_terms = [lap_scale, 2.0 * libm::fabs(k * phi), libm::fabs(phi * phi * phi), libm::fabs(pb)];
    let field = Residual::scalar(k2.lap + 2.0 * k * phi + sigma * phi * phi * phi + pb, max_abs(&field_terms));
    let h: [f64; 4] = core::array::from_fn(|i| k2.hess[i] - 0.5 * k2.g[i] * k2.lap);
    let hessian = Residual::new(
        Tensor::from_data(Valence::new(2, 0), 2, h.to_vec())?,
        k2.hess_scale.max(0.5 * max_abs(&k2.g) * libm::fabs(k2.lap)),
    );
    Ok(KinkOdeResidual { curvature, field, hessian })
}

/// Kink system residuals for a two-dimensional metric `g2` and scalar `φ`
/// with constants `k`, `σ`.
pub fn kink_ode_residual(
    g2: &SmoothField,
    phi: &dyn ComponentFn,
    k: f64,
    sigma: f64,
    p: &ChartPoint,
) -> Result<KinkOdeResidual> {
    ode(&kink_pieces(g2, phi, p)?, k, sigma, 0.0)
}

/// Constants of a deformed kink.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CKinkConstants {
    pub k: f64,
    pub l2: f64,
    pub tau: f64,
    pub sigma: f64,
    pub big_k: f64,
    pub big_l: f64,
    /// `+1` for the metric as constructed, `−1` on the opposite-metric
    /// branch, where `k` and `τ` enter the constants map with flipped sign.
    pub branch: f64,
}

/// Deformed kink residuals plus the warp normalization and constants map.
#[derive(Clone, Debug, PartialEq)]
pub struct CKinkOdeResidual {
    pub ode: KinkOdeResidual,
    /// `λ − τ F²` with `F² = −2φ²`.
    pub warp: Residual,
    /// `k − K − 3L/4` and `l² − 2τ(K + L/2)² L`.
    pub constants: Residual,
}

/// Deformed kink system at `p`. With `l2 = 0` it reduces to
/// [`kink_ode_residual`].
pub fn ckink_ode_residual(
    g2: &SmoothField,
    phi: &dyn ComponentFn,
    c: &CKinkConstants,
    lambda: &dyn ComponentFn,
    p: &ChartPoint,
) -> Result<CKinkOdeResidual> {
    let k2 = kink_pieces(g2, phi, p)?;
    let ode = ode(&k2, c.k, c.sigma, c.tau * c.l2)?;
    let mut lam = [0.0];
    if lambda.dim() != 2 || lambda.len() != 1 {
        return Err(Error::DimensionMismatch { expected: 2, got: lambda.dim() });
    }
    lambda.eval_f64(p.coords(), &mut lam);
    let f2 = -2.0 * k2.phi * k2.phi;
    let warp = Residual::scalar(lam[0] - c.tau * f2, libm::fabs(lam[0]).max(libm::fabs(f2)));
    let hk = c.big_k + 0.5 * c.big_l;
    let map_l2 = 2.0 * c.tau * hk * hk * c.big_l;
    let map_l2 = c.branch * map_l2;
    let consts = vec![c.branch * c.k - c.big_k - 0.75 * c.big_l, c.l2 - map_l2];
    let scale = libm::fabs(c.k).max(libm::fabs(c.big_k)).max(libm::fabs(c.l2)).max(libm::fabs(map_l2));
    let constants = Residual::new(Tensor::from_data(Valence::new(1, 0), 2, consts)?, scale);
    Ok(CKinkOdeResidual { ode, warp, constants })
}
