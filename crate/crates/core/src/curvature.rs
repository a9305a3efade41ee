//! Connection and curvature.
//!
//! Sign conventions (one canonical statement; every residual depends on it):
//!
//! ```text
//! Γ^λ_{μν}    = ½ g^{λσ} (∂_μ g_{σν} + ∂_ν g_{σμ} − ∂_σ g_{μν})
//! R_{μνκ}^λ   = ∂_μ Γ^λ_{νκ} − ∂_ν Γ^λ_{μκ} + Γ^λ_{μξ} Γ^ξ_{νκ} − Γ^λ_{νξ} Γ^ξ_{μκ}
//! R_{μνκλ}    = R_{μνκ}^σ g_{σλ}
//! R_{μν}      = R_{κμν}^κ,      R = g^{μν} R_{μν}
//! ```
//!
//! With these, a space of constant sectional curvature `k` has
//! `R_{μνκλ} = k (g_{μλ} g_{κν} − g_{μκ} g_{λν})` and the round sphere has
//! positive `R`.
//!
//! The Weyl tensor (d ≥ 3) is Riemann minus its Schouten part,
//!
//! ```text
//! P_{μν}     = (R_{μν} − R g_{μν} / (2(d−1))) / (d−2)
//! C_{μνκλ}   = R_{μνκλ} − (g_{μλ} P_{κν} + P_{μλ} g_{κν} − g_{μκ} P_{λν} − P_{μκ} g_{λν})
//! ```
//!
//! which removes every trace of `R_{μνκλ}` in this index placement.
//!
//! Storage: `Γ` is a (2,1) tensor `[μ][ν][λ]`; `R_{μνκ}^λ` is (3,1)
//! `[μ][ν][κ][λ]`; covariant derivatives prepend the derivative slot.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{jet_tensor, SmoothField};
use crate::jet::Jet;
use crate::linalg::invert_jets;
use crate::tensor::{ChartPoint, Tensor, TensorValue, Valence};

pub type JetTensor = Tensor<Jet>;

/// Levi-Civita connection of a metric, as jets around one point.
#[derive(Clone, Debug)]
pub struct Connection {
    dim: usize,
    g: Vec<Jet>,
    ginv: Vec<Jet>,
    /// `[μ][ν][λ]` → Γ^λ_{μν}
    gamma: Vec<Jet>,
}

impl Connection {
    /// Connection from metric jets of `order ≥ 1`; Γ comes out one order lower.
    pub fn new(g: &SmoothField, p: &ChartPoint, order: usize) -> Result<Self> {
        if g.valence() != Valence::new(0, 2) {
            return Err(Error::Unsupported("metric must be a (0,2) field".into()));
        }
        if order == 0 {
            return Err(Error::Unsupported("connection needs metric jets of order ≥ 1".into()));
        }
        let jets = jet_tensor(g, p, order)?;
        Self::from_metric_jets(jets.dim(), jets.into_data())
    }

    pub fn from_metric_jets(dim: usize, g: Vec<Jet>) -> Result<Self> {
        let d = dim;
        let ginv = invert_jets(d, &g)?;
        // dg[(σ d + ν) d + μ] = ∂_μ g_{σν}
        let mut dg = Vec::with_capacity(d * d * d);
        for s in 0..d {
            for n in 0..d {
                for m in 0..d {
                    dg.push(g[s * d + n].partial(m));
                }
            }
        }
        let order = dg[0].order();
        let ginv_low: Vec<Jet> = ginv.iter().map(|j| j.truncate(order)).collect();
        let mut gamma = vec![Jet::zero(d, order); d * d * d];
        // lowered Christoffel Γ_{σμν} = ½(∂_μ g_{σν} + ∂_ν g_{σμ} − ∂_σ g_{μν})
        let mut low = vec![Jet::zero(d, order); d * d * d];
        for s in 0..d {
            for m in 0..d {
                for n in m..d {
                    let mut acc = dg[(s * d + n) * d + m].clone();
                    acc += &dg[(s * d + m) * d + n];
                    acc -= &dg[(m * d + n) * d + s];
                    let acc = acc.scale(0.5);
                    low[(s * d + n) * d + m] = acc.clone();
                    low[(s * d + m) * d + n] = acc;
                }
            }
        }
        for m in 0..d {
            for n in m..d {
                for l in 0..d {
                    let mut acc = Jet::zero(d, order);
                    for s in 0..d {
                        acc.add_mul(&ginv_low[l * d + s], &low[(s * d + m) * d + n]);
                    }
                    gamma[(n * d + m) * d + l] = acc.clone();
                    gamma[(m * d + n) * d + l] = acc;
                }
            }
        }
        Ok(Self { dim: d, g, ginv, gamma })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Order of the metric jets.
    pub fn metric_order(&self) -> usize {
        self.g[0].order()
    }

    pub fn metric(&self) -> &[Jet] {
        &self.g
    }

    pub fn inverse_metric(&self) -> &[Jet] {
        &self.ginv
    }

    /// `Γ^λ_{μν}`
    #[inline]
    pub fn gamma(&self, l: usize, m: usize, n: usize) -> &Jet {
        &self.gamma[(m * self.dim + n) * self.dim + l]
    }

    pub fn metric_tensor(&self) -> JetTensor {
        Tensor::from_data(Valence::new(0, 2), self.dim, self.g.clone()).expect("d×d")
    }

    pub fn inverse_metric_tensor(&self) -> JetTensor {
        Tensor::from_data(Valence::new(2, 0), self.dim, self.ginv.clone()).expect("d×d")
    }

    pub fn christoffel_tensor(&self) -> JetTensor {
        Tensor::from_data(Valence::new(2, 1), self.dim, self.gamma.clone()).expect("d³")
    }

    /// `R_{μνκ}^λ` as jets two orders below the metric.
    pub fn riemann_up(&self) -> Result<JetTensor> {
        let d = self.dim;
        if self.metric_order() < 2 {
            return Err(Error::Unsupported("Riemann needs metric jets of order ≥ 2".into()));
        }
        let order = self.metric_order() - 2;
        let mut out = vec![Jet::zero(d, order); d * d * d * d];
        for m in 0..d {
            for n in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = self.gamma(l, n, k).partial(m);
                        acc -= &self.gamma(l, m, k).partial(n);
                        for x in 0..d {
                            acc.add_mul(self.gamma(l, m, x), self.gamma(x, n, k));
                            acc.add_mul_scaled(-1.0, self.gamma(l, n, x), self.gamma(x, m, k));
                        }
                        out[((m * d + n) * d + k) * d + l] = acc;
                    }
                }
            }
        }
        Tensor::from_data(Valence::new(3, 1), d, out)
    }

    /// `R_{μνκλ}` as jets two orders below the metric.
    pub fn riemann_lowered(&self) -> Result<JetTensor> {
        let up = self.riemann_up()?;
        Ok(lower_last(&up, &self.g))
    }

    /// `D_κ t` with the derivative slot prepended; order drops by one.
    pub fn covariant(&self, t: &JetTensor) -> Result<JetTensor> {
        let d = self.dim;
        if t.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: t.dim() });
        }
        let v = t.valence();
        let r = v.rank();
        let t_order = t.data()[0].order();
        if t_order == 0 {
            return Err(Error::Unsupported("covariant derivative needs jets of order ≥ 1".into()));
        }
        let order = (t_order - 1).min(self.gamma[0].order());
        let out_val = Valence::new(v.cov + 1, v.contra);
        let mut out = Tensor::filled(out_val, d, Jet::zero(d, order));
        let mut idx = vec![0usize; r];
        for flat in 0..out.data().len() {
            let full = out.unflatten(flat);
            let kappa = full[0];
            idx.copy_from_slice(&full[1..]);
            let mut acc = t.get(&idx).partial(kappa).truncate(order);
            for s in 0..r {
                let orig = idx[s];
                for sig in 0..d {
                    idx[s] = sig;
                    if s < v.cov {
                        acc.add_mul_scaled(-1.0, self.gamma(sig, kappa, orig), t.get(&idx));
                    } else {
                        acc.add_mul(self.gamma(orig, kappa, sig), t.get(&idx));
                    }
                }
                idx[s] = orig;
            }
            out.data_mut()[flat] = acc;
        }
        Ok(out)
    }
}

/// Lower the last (contravariant) slot of `t` with metric jets `g`.
pub fn lower_last(t: &JetTensor, g: &[Jet]) -> JetTensor {
    let d = t.dim();
    let v = t.valence();
    debug_assert!(v.contra >= 1);
    let order = t.data()[0].order().min(g[0].order());
    let out_val = Valence::new(v.cov + 1, v.contra - 1);
    let mut out = Tensor::filled(out_val, d, Jet::zero(d, order));
    let n = t.data().len() / d;
    for base in 0..n {
        for l in 0..d {
            let mut acc = Jet::zero(d, order);
            for s in 0..d {
                acc.add_mul(&t.data()[base * d + s], &g[s * d + l]);
            }
            out.data_mut()[base * d + l] = acc;
        }
    }
    out
}

/// Raise the last covariant slot of a purely covariant `t` with `ginv`,
/// producing a tensor whose last slot is contravariant.
pub fn raise_last(t: &JetTensor, ginv: &[Jet]) -> JetTensor {
    let d = t.dim();
    let v = t.valence();
    debug_assert!(v.contra == 0 && v.cov >= 1);
    let order = t.data()[0].order().min(ginv[0].order());
    let out_val = Valence::new(v.cov - 1, 1);
    let mut out = Tensor::filled(out_val, d, Jet::zero(d, order));
    let n = t.data().len() / d;
    for base in 0..n {
        for l in 0..d {
            let mut acc = Jet::zero(d, order);
            for s in 0..d {
                acc.add_mul(&t.data()[base * d + s], &ginv[s * d + l]);
            }
            out.data_mut()[base * d + l] = acc;
        }
    }
    out
}

/// `F_{μν} = ∂_μ A_ν − ∂_ν A_μ` from potential jets; one order lower.
pub fn gauge_curvature(a: &JetTensor) -> Result<JetTensor> {
    if a.valence() != Valence::new(1, 0) {
        return Err(Error::Unsupported("gauge potential must be a covector".into()));
    }
    let d = a.dim();
    let order = a.data()[0].order();
    if order == 0 {
        return Err(Error::Unsupported("gauge curvature needs potential jets of order ≥ 1".into()));
    }
    let mut out = Tensor::filled(Valence::new(2, 0), d, Jet::zero(d, order - 1));
    for m in 0..d {
        for n in 0..d {
            let mut f = a.data()[n].partial(m);
            f -= &a.data()[m].partial(n);
            out.set(&[m, n], f);
        }
    }
    Ok(out)
}

/// Values of a jet tensor.
pub fn values(t: &JetTensor) -> TensorValue {
    t.map(|j| j.value())
}

/// Curvature of a metric at one point, as plain values.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureBundle {
    pub christoffel: TensorValue,
    pub riemann_up: TensorValue,
    pub riemann: TensorValue,
    pub ricci: TensorValue,
    pub scalar: f64,
    /// `None` below three dimensions.
    pub weyl: Option<TensorValue>,
}

pub fn christoffel(g: &SmoothField, p: &ChartPoint) -> Result<TensorValue> {
    let conn = Connection::new(g, p, 1)?;
    Ok(values(&conn.christoffel_tensor()))
}

pub fn curvature_bundle(g: &SmoothField, p: &ChartPoint) -> Result<CurvatureBundle> {
    let conn = Connection::new(g, p, 2)?;
    bundle_from_connection(&conn)
}

pub fn bundle_from_connection(conn: &Connection) -> Result<CurvatureBundle> {
    let d = conn.dim();
    let up = values(&conn.riemann_up()?);
    let g: Vec<f64> = conn.metric().iter().map(|j| j.value()).collect();
    let ginv: Vec<f64> = conn.inverse_metric().iter().map(|j| j.value()).collect();
    let riemann = lower_last_values(&up, &g);
    let ricci = ricci_from_up(&up);
    let scalar = trace_with(&ricci, &ginv);
    let weyl = if d >= 3 { Some(weyl_from(&g, &riemann, &ricci, scalar)) } else { None };
    Ok(CurvatureBundle {
        christoffel: values(&conn.christoffel_tensor()),
        riemann_up: up,
        riemann,
        ricci,
        scalar,
        weyl,
    })
}

/// Weyl tensor `C_{μνκλ}`; rejected below three dimensions.
pub fn weyl(g: &SmoothField, p: &ChartPoint) -> Result<TensorValue> {
    if g.dim() < 3 {
        return Err(Error::WeylDimension(g.dim()));
    }
    let b = curvature_bundle(g, p)?;
    Ok(b.weyl.expect("d ≥ 3"))
}

fn lower_last_values(up: &TensorValue, g: &[f64]) -> TensorValue {
    let d = up.dim();
    let mut out = TensorValue::zeros(Valence::new(up.valence().cov + 1, 0), d);
    let n = up.data().len() / d;
    for base in 0..n {
        for l in 0..d {
            let mut acc = 0.0;
            for s in 0..d {
                acc += up.data()[base * d + s] * g[s * d + l];
            }
            out.data_mut()[base * d + l] = acc;
        }
    }
    out
}

fn ricci_from_up(up: &TensorValue) -> TensorValue {
    let d = up.dim();
    let mut ric = TensorValue::zeros(Valence::new(2, 0), d);
    for m in 0..d {
        for n in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                acc += up.get(&[k, m, n, k]);
            }
            ric.set(&[m, n], acc);
        }
    }
    ric
}

/// `g^{μν} t_{μν}`
pub fn trace_with(t: &TensorValue, ginv: &[f64]) -> f64 {
    t.data().iter().zip(ginv.iter()).map(|(a, b)| a * b).sum()
}

/// The Schouten-built trace part subtracted from Riemann, see module docs.
pub fn weyl_from(g: &[f64], riemann: &TensorValue, ricci: &TensorValue, scalar: f64) -> TensorValue {
    let d = riemann.dim();
    let df = d as f64;
    let mut p = vec![0.0; d * d];
    for i in 0..d * d {
        p[i] = (ricci.data()[i] - scalar * g[i] / (2.0 * (df - 1.0))) / (df - 2.0);
    }
    let mut c = riemann.clone();
    for m in 0..d {
        for n in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let x = g[m * d + l] * p[k * d + n] + p[m * d + l] * g[k * d + n]
                        - g[m * d + k] * p[l * d + n]
                        - p[m * d + k] * g[l * d + n];
                    let f = ((m * d + n) * d + k) * d + l;
                    c.data_mut()[f] -= x;
                }
            }
        }
    }
    c
}

/// `D_κ t` of a field at `p`, using first-order jets of `t` and `g`.
pub fn covariant_derivative(t: &SmoothField, g: &SmoothField, p: &ChartPoint) -> Result<TensorValue> {
    let conn = Connection::new(g, p, 1)?;
    let tj = jet_tensor(t, p, 1)?;
    Ok(values(&conn.covariant(&tj)?))
}

/// `D^κ D_κ F_{μν}` from jets of `F` (order ≥ 2) and a connection (metric
/// order ≥ 2); returns jets of order `min(F, metric) − 2`.
pub fn two_form_laplacian_jets(f: &JetTensor, conn: &Connection) -> Result<JetTensor> {
    let df = conn.covariant(f)?;
    let ddf = conn.covariant(&df)?;
    let d = conn.dim();
    let order = ddf.data()[0].order();
    let ginv = conn.inverse_metric();
    let mut out = Tensor::filled(Valence::new(2, 0), d, Jet::zero(d, order));
    for m in 0..d {
        for n in 0..d {
            let mut acc = Jet::zero(d, order);
            for a in 0..d {
                for b in 0..d {
                    acc.add_mul(&ginv[a * d + b], ddf.get(&[a, b, m, n]));
                }
            }
            out.set(&[m, n], acc);
        }
    }
    Ok(out)
}

/// `D² F_{μν}` for a two-form field.
pub fn two_form_laplacian(f: &SmoothField, g: &SmoothField, p: &ChartPoint) -> Result<TensorValue> {
    if f.valence() != Valence::new(2, 0) {
        return Err(Error::Unsupported("two-form must be a (0,2) field".into()));
    }
    let conn = Connection::new(g, p, 2)?;
    let fj = jet_tensor(f, p, 2)?;
    Ok(values(&two_form_laplacian_jets(&fj, &conn)?))
}

/// `max |D_μ K_ν + D_ν K_μ|` from the covariant derivative `DK[μ][ν]`.
pub fn killing_residual_from(dk: &TensorValue) -> f64 {
    let d = dk.dim();
    let mut worst: f64 = 0.0;
    for m in 0..d {
        for n in m..d {
            worst = worst.max(libm::fabs(dk.get(&[m, n]) + dk.get(&[n, m])));
        }
    }
    worst
}

/// Killing-equation residual of a covector field at `p`.
pub fn killing_residual(k: &SmoothField, g: &SmoothField, p: &ChartPoint) -> Result<f64> {
    if k.valence() != Valence::new(1, 0) {
        return Err(Error::Unsupported("Killing candidate must be a covector field".into()));
    }
    let dk = covariant_derivative(k, g, p)?;
    Ok(killing_residual_from(&dk))
}

/// Cyclic sum `D_ξ R_{μνκ}^λ + D_μ R_{νξκ}^λ + D_ν R_{ξμκ}^λ` stored
/// `[ξ][μ][ν][κ][λ]`, with the size of its summands
/// `max(|∂R|, |Γ| |R|)`. Needs metric jets of order 3.
pub fn second_bianchi(g: &SmoothField, p: &ChartPoint) -> Result<(TensorValue, f64)> {
    let conn = Connection::new(g, p, 3)?;
    let r = conn.riemann_up()?;
    let dr = conn.covariant(&r)?;
    let d = conn.dim();
    let mut out = TensorValue::zeros(Valence::new(4, 1), d);
    for x in 0..d {
        for m in 0..d {
            for n in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let v = dr.get(&[x, m, n, k, l]).value()
                            + dr.get(&[m, n, x, k, l]).value()
                            + dr.get(&[n, x, m, k, l]).value();
                        out.set(&[x, m, n, k, l], v);
                    }
                }
            }
        }
    }
    let dr_max = r.data().iter().flat_map(|j| (0..d).map(move |i| libm::fabs(j.first(i)))).fold(0.0, f64::max);
    let r_max = r.data().iter().fold(0.0f64, |a, j| a.max(libm::fabs(j.value())));
    let gam_max = conn.gamma.iter().fold(0.0f64, |a, j| a.max(libm::fabs(j.value())));
    Ok((out, dr_max.max(gam_max * r_max)))
}
