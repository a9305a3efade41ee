use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::BlockMetric;
use crate::curvature::Connection;
use crate::error::{Error, Result};
use crate::field::{jet_eval_fn, jet_tensor, SmoothField};
use crate::jet::Jet;
use crate::linalg::invert;
use crate::tensor::{ChartPoint, Tensor, TensorValue, Valence};

use super::geometry::{max_abs, partial_max};
use super::Residual;

/// Fundamental forms of an adapted-frame block metric at one point, with
/// the umbilicity, trace and gauge-form checks.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalForms {
    /// `Ê_{iαβ}` stored `[i][α][β]`.
    pub e_hat: Vec<f64>,
    /// `E_{αij}` stored `[α][i][j]`.
    pub e: Vec<f64>,
    /// `f^i_{αβ}` stored `[i][α][β]`.
    pub f: Vec<f64>,
    /// `E_{γij} − (1/n) h^{kl} E_{γkl} h_{ij}`.
    pub umbilicity: Residual,
    /// `E_{αi}^i − n/(r−1) (F⁻¹)_α^β ∇_γ F_β^γ`; `None` where the external
    /// field strength is not invertible.
    pub trace: Option<Residual>,
    /// `f` itself for `n > 1`; for `n = 1` the part of `f_{αβ}` not
    /// proportional to `F⁻¹_{αβ}`, when `F` is invertible.
    pub gauge_form: Option<Residual>,
    /// `λ f_{αβ} F^{αβ} / (2r)` for `n = 1`, whose square is `l²`.
    pub l_measured: Option<f64>,
}

/// Fundamental forms of `block` with external field strength taken from the
/// potential `a` (its first `r` components).
pub fn fundamental_forms(block: &BlockMetric, a: &SmoothField, p: &ChartPoint) -> Result<FundamentalForms> {
    let (r, n) = (block.external_dim(), block.internal_dim());
    let d = r + n;
    if p.dim() != d || a.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
    }
    let x = p.coords();
    let ext = jet_eval_fn(&**block.external_fn(), x, 2)?.into_jets();
    let lam = jet_eval_fn(&**block.warp_fn(), x, 1)?.into_jets().remove(0);
    let c = jet_eval_fn(&**block.internal_fn(), x, 1)?.into_jets();
    let av: Vec<Jet> = match block.potential_fn() {
        Some(f) => jet_eval_fn(&**f, x, 1)?.into_jets(),
        None => vec![Jet::zero(d, 1); r * n],
    };
    // h_ij = λ c_ij
    let h: Vec<Jet> = c.iter().map(|cij| &lam * cij).collect();
    let hv: Vec<f64> = h.iter().map(|j| j.value()).collect();
    let hinv = invert(n, &hv)?;
    let ai = |al: usize, i: usize| &av[al * n + i];

    // f^i_{αβ}
    let mut f = vec![0.0; n * r * r];
    for i in 0..n {
        for al in 0..r {
            for be in 0..r {
                let mut v = ai(be, i).first(al) - ai(al, i).first(be);
                for j in 0..n {
                    v -= ai(al, j).value() * ai(be, i).first(r + j);
                    v += ai(be, j).value() * ai(al, i).first(r + j);
                }
                f[(i * r + al) * r + be] = v;
            }
        }
    }
    let mut e_hat = vec![0.0; n * r * r];
    for i in 0..n {
        for al in 0..r {
            for be in 0..r {
                let fl: f64 = (0..n).map(|j| hv[i * n + j] * f[(j * r + al) * r + be]).sum();
                e_hat[(i * r + al) * r + be] = 0.5 * (ext[al * r + be].first(r + i) + fl);
            }
        }
    }
    // E_{αij} = ½ (∂_α h_ij − a_α^k ∂_k h_ij − h_kj ∂_i a_α^k − h_ik ∂_j a_α^k)
    let mut e = vec![0.0; r * n * n];
    let mut e_scale: f64 = 0.0;
    for al in 0..r {
        for i in 0..n {
            for j in 0..n {
                let mut lie = 0.0;
                for k in 0..n {
                    lie += ai(al, k).value() * h[i * n + j].first(r + k);
                    lie += hv[k * n + j] * ai(al, k).first(r + i);
                    lie += hv[i * n + k] * ai(al, k).first(r + j);
                }
                let dh = h[i * n + j].first(al);
                e_scale = e_scale.max(libm::fabs(dh)).max(libm::fabs(lie));
                e[(al * n + i) * n + j] = 0.5 * (dh - lie);
            }
        }
    }
    let tr: Vec<f64> = (0..r).map(|al| (0..n * n).map(|ij| hinv[ij] * e[al * n * n + ij]).sum()).collect();
    let mut umb = vec![0.0; r * n * n];
    for al in 0..r {
        for ij in 0..n * n {
            umb[al * n * n + ij] = e[al * n * n + ij] - tr[al] / n as f64 * hv[ij];
        }
    }
    let umbilicity = Residual::new(flat(umb), e_scale * (1.0 + max_abs(&hinv) * max_abs(&hv)));

    // External field strength and its inverse on the first r coordinates.
    let ext_r: Vec<Jet> = ext.iter().map(|j| j.restrict(r)).collect();
    let aj = jet_tensor(a, p, 2)?;
    let a_r: Vec<Jet> = aj.data()[..r].iter().map(|j| j.restrict(r)).collect();
    let mut fr = Tensor::filled(Valence::new(2, 0), r, Jet::zero(r, 1));
    for al in 0..r {
        for be in 0..r {
            fr.set(&[al, be], &a_r[be].partial(al) - &a_r[al].partial(be));
        }
    }
    let frv: Vec<f64> = fr.data().iter().map(|j| j.value()).collect();
    let gext: Vec<f64> = ext_r.iter().map(|j| j.value()).collect();
    let ginv_ext = invert(r, &gext)?;
    // F_α^β
    let mut fmix = vec![0.0; r * r];
    for al in 0..r {
        for be in 0..r {
            fmix[al * r + be] = (0..r).map(|g| frv[al * r + g] * ginv_ext[g * r + be]).sum();
        }
    }
    let fmix_inv = if r >= 2 { invert(r, &fmix).ok() } else { None };

    let trace = match &fmix_inv {
        Some(finv) => {
            let conn = Connection::from_metric_jets(r, ext_r.clone())?;
            let dfr = conn.covariant(&fr)?;
            // ∇_γ F_β^γ = g^{γδ} ∇_γ F_{βδ}
            let div: Vec<f64> = (0..r)
                .map(|be| {
                    let mut s = 0.0;
                    for ga in 0..r {
                        for de in 0..r {
                            s += ginv_ext[ga * r + de] * dfr.get(&[ga, be, de]).value();
                        }
                    }
                    s
                })
                .collect();
            let coef = n as f64 / (r as f64 - 1.0);
            let rhs: Vec<f64> =
                (0..r).map(|al| coef * (0..r).map(|be| finv[al * r + be] * div[be]).sum::<f64>()).collect();
            let res: Vec<f64> = (0..r).map(|al| tr[al] - rhs[al]).collect();
            let gam = conn.christoffel_tensor();
            let df_scale = partial_max(fr.data(), 1).max(partial_max(gam.data(), 0) * max_abs(&frv));
            let scale = (max_abs(&tr))
                .max(max_abs(&rhs))
                .max(coef * max_abs(finv) * df_scale * max_abs(&ginv_ext))
                .max(e_scale * max_abs(&hinv));
            Some(Residual::new(Tensor::from_data(Valence::new(1, 0), r, res)?, scale))
        }
        None => None,
    };

    let mut l_measured = None;
    let gauge_form = if n > 1 {
        let s = partial_max(&av, 1) * (1.0 + partial_max(&av, 0));
        Some(Residual::new(flat(f.clone()), s))
    } else if let Some(finv) = &fmix_inv {
        // F^{αβ} and F⁻¹_{αβ} = (F⁻¹)_α^γ g_{γβ}
        let mut fup = vec![0.0; r * r];
        let mut finv_low = vec![0.0; r * r];
        for al in 0..r {
            for be in 0..r {
                let mut s = 0.0;
                for g in 0..r {
                    for dd in 0..r {
                        s += ginv_ext[al * r + g] * ginv_ext[be * r + dd] * frv[g * r + dd];
                    }
                }
                fup[al * r + be] = s;
                finv_low[al * r + be] = (0..r).map(|g| finv[al * r + g] * gext[g * r + be]).sum();
            }
        }
        let contr: f64 = (0..r * r).map(|i| f[i] * fup[i]).sum();
        l_measured = Some(lam.value() * contr / (2.0 * r as f64));
        let res: Vec<f64> = (0..r * r).map(|i| f[i] + contr / r as f64 * finv_low[i]).collect();
        let scale = max_abs(&f).max(libm::fabs(contr) / r as f64 * max_abs(&finv_low));
        Some(Residual::new(Tensor::from_data(Valence::new(2, 0), r, res)?, scale))
    } else {
        None
    };

    Ok(FundamentalForms { e_hat, e, f, umbilicity, trace, gauge_form, l_measured })
}

/// A flat list of components as a covector over its own length.
fn flat(v: Vec<f64>) -> TensorValue {
    let len = v.len().max(1);
    let data = if v.is_empty() { vec![0.0] } else { v };
    Tensor::from_data(Valence::new(1, 0), len, data).expect("len entries")
}
