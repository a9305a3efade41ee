use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::JetTensor;
use crate::error::{Error, Result};
use crate::field::SmoothField;
use crate::jet::Jet;
use crate::linalg::signature_index;
use crate::tensor::{ChartPoint, Tensor, TensorValue, Valence};

use super::geometry::{max_abs, partial_max, PointGeometry};
use super::Residual;

/// Residuals of the (para-)complex structure `J = √(d/|F²|) F_μ^ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureResidual {
    /// `J_μ^κ J_κ^ν + σ δ_μ^ν`
    pub square: Residual,
    /// `J_μ^κ J_ν^λ g_{κλ} − σ g_{μν}`
    pub hermitian: Residual,
    /// `D_κ J_μ^ν`
    pub parallel: Residual,
    /// Riemann minus the constant-holomorphic-curvature form.
    pub holomorphic: Residual,
    /// Number of negative eigenvalues of `g` at the point.
    pub signature_index: usize,
}

/// Structure residuals with holomorphic curvature `H = F²/d` read off the
/// field itself.
pub fn structure_residual(g: &SmoothField, a: &SmoothField, sigma: f64, p: &ChartPoint) -> Result<StructureResidual> {
    let geo = PointGeometry::new(g, a, p, 2, 2)?;
    let h = geo.f_squared() / geo.d as f64;
    structure_from(&geo, sigma, h)
}

/// Structure residuals with an explicit holomorphic curvature `h`, for
/// factors whose field is not normalized to `F² = d H`.
pub fn structure_residual_with(
    g: &SmoothField,
    a: &SmoothField,
    sigma: f64,
    h: f64,
    p: &ChartPoint,
) -> Result<StructureResidual> {
    let geo = PointGeometry::new(g, a, p, 2, 2)?;
    structure_from(&geo, sigma, h)
}

pub(crate) fn structure_from(geo: &PointGeometry, sigma: f64, h: f64) -> Result<StructureResidual> {
    if sigma != 1.0 && sigma != -1.0 {
        return Err(Error::InvalidParameter("σ must be +1 or -1".into()));
    }
    let d = geo.d;
    let f2v = geo.f_squared();
    let natural = geo.s.f * geo.s.ginv;
    if !(libm::fabs(f2v) > 1e-14 * natural * natural) {
        return Err(Error::NullStructure);
    }
    let ginv = geo.conn.inverse_metric();
    let gj = geo.conn.metric();
    let order = geo.f.data()[0].order().min(ginv[0].order());
    let zero = Jet::zero(d, order);
    let fj: Vec<Jet> = geo.f.data().iter().map(|j| j.truncate(order)).collect();

    // F_μ^ν and F² as jets
    let mut fup = vec![zero.clone(); d * d];
    for m in 0..d {
        for n in 0..d {
            let mut acc = zero.clone();
            for x in 0..d {
                acc.add_mul(&fj[m * d + x], &ginv[x * d + n]);
            }
            fup[m * d + n] = acc;
        }
    }
    let mut f2 = zero.clone();
    for m in 0..d {
        for n in 0..d {
            f2.add_mul(&fup[m * d + n], &fup[n * d + m]);
        }
    }
    // the trace F_μ^ν F_ν^μ is −F²
    let abs_f2 = f2.scale(if f2v < 0.0 { 1.0 } else { -1.0 });
    let norm = abs_f2.scale(1.0 / d as f64).sqrt().recip();
    let jdata: Vec<Jet> = fup.iter().map(|x| x * &norm).collect();
    let jt: JetTensor = Tensor::from_data(Valence::new(1, 1), d, jdata)?;
    let jv: Vec<f64> = jt.data().iter().map(|x| x.value()).collect();
    let g = &geo.g;

    let mut sq = vec![0.0; d * d];
    let mut herm = vec![0.0; d * d];
    let mut jl = vec![0.0; d * d];
    for m in 0..d {
        for n in 0..d {
            let mut a = 0.0;
            let mut b = 0.0;
            let mut c = 0.0;
            for k in 0..d {
                a += jv[m * d + k] * jv[k * d + n];
                c += jv[m * d + k] * g[k * d + n];
                for l in 0..d {
                    b += jv[m * d + k] * jv[n * d + l] * g[k * d + l];
                }
            }
            sq[m * d + n] = a + if m == n { sigma } else { 0.0 };
            herm[m * d + n] = b - sigma * g[m * d + n];
            jl[m * d + n] = c;
        }
    }
    let jmax = max_abs(&jv);
    let sq_scale = (jmax * jmax).max(1.0);
    let herm_scale = (jmax * jmax * geo.s.g).max(geo.s.g);

    let dj = geo.conn.covariant(&jt)?;
    let djv = crate::curvature::values(&dj);
    let dj_scale = partial_max(jt.data(), 1).max(geo.s.gamma * jmax);

    let (riem, _) = geo.need_curvature()?;
    let mut hol = TensorValue::zeros(Valence::new(4, 0), d);
    let mut form_max: f64 = 0.0;
    for m in 0..d {
        for n in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let form = g[m * d + l] * g[k * d + n] - g[m * d + k] * g[l * d + n]
                        + sigma * (jl[m * d + l] * jl[n * d + k] - jl[m * d + k] * jl[n * d + l])
                        - 2.0 * sigma * jl[m * d + n] * jl[k * d + l];
                    form_max = form_max.max(libm::fabs(form));
                    hol.set(&[m, n, k, l], riem.get(&[m, n, k, l]) - h / 4.0 * form);
                }
            }
        }
    }
    let hol_scale = geo.s.riemann().max(libm::fabs(h) / 4.0 * form_max);
    let gvals: Vec<f64> = gj.iter().map(|x| x.value()).collect();

    Ok(StructureResidual {
        square: Residual::new(Tensor::from_data(Valence::new(1, 1), d, sq)?, sq_scale),
        hermitian: Residual::new(Tensor::from_data(Valence::new(2, 0), d, herm)?, herm_scale),
        parallel: Residual::new(djv, dj_scale),
        holomorphic: Residual::new(hol, hol_scale),
        signature_index: signature_index(d, &gvals),
    })
}
