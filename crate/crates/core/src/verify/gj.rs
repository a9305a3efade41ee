use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::JetTensor;
use crate::error::{Error, Result};
use crate::field::SmoothField;
use crate::jet::Jet;
use crate::tensor::{ChartPoint, Tensor, TensorValue, Valence};

use super::geometry::{max_abs, PointGeometry};
use super::Residual;

fn tensor(rank: usize, d: usize, data: Vec<f64>) -> TensorValue {
    Tensor::from_data(Valence::new(rank, 0), d, data).expect("d^rank entries")
}

/// Residuals of the three conformal-flatness conditions at one point.
///
/// `weyl` carries Riemann index symmetries, `ricci` is symmetric and
/// traceless, `field` is antisymmetric in its last two slots.
#[derive(Clone, Debug, PartialEq)]
pub struct GJEquationSet {
    pub weyl: Residual,
    pub ricci: Residual,
    pub field: Residual,
}

/// Pieces shared by the curvature conditions.
struct Algebra {
    d: usize,
    f2: f64,
    ff: Vec<f64>,
    /// `½ (F_{μν} F_{κλ} − F_{μ[κ} F_{λ]ν})`
    t1: Vec<f64>,
}

impl Algebra {
    fn new(geo: &PointGeometry) -> Self {
        let d = geo.d;
        let f = &geo.fv;
        let mut t1 = vec![0.0; d * d * d * d];
        for m in 0..d {
            for n in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let fa = 0.5 * (f[m * d + k] * f[l * d + n] - f[m * d + l] * f[k * d + n]);
                        t1[((m * d + n) * d + k) * d + l] = 0.5 * (f[m * d + n] * f[k * d + l] - fa);
                    }
                }
            }
        }
        Self { d, f2: geo.f_squared(), ff: geo.ff(), t1 }
    }

    /// `½ (g_{μκ} X_{λν} − g_{μλ} X_{κν}) − ½ (g_{νκ} X_{λμ} − g_{νλ} X_{κμ})`
    fn g_wedge(&self, g: &[f64], x: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut out = vec![0.0; d * d * d * d];
        for m in 0..d {
            for n in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let a = 0.5 * (g[m * d + k] * x[l * d + n] - g[m * d + l] * x[k * d + n]);
                        let b = 0.5 * (g[n * d + k] * x[l * d + m] - g[n * d + l] * x[k * d + m]);
                        out[((m * d + n) * d + k) * d + l] = a - b;
                    }
                }
            }
        }
        out
    }
}

/// Residuals of the conformal-flatness conditions for metric `g` and
/// potential `a` at `p`. Needs no curvature constant.
pub fn gj_residual(g: &SmoothField, a: &SmoothField, p: &ChartPoint) -> Result<GJEquationSet> {
    if g.dim() < 3 {
        return Err(Error::WeylDimension(g.dim()));
    }
    let geo = PointGeometry::new(g, a, p, 2, 2)?;
    gj_from(&geo)
}

pub(crate) fn gj_from(geo: &PointGeometry) -> Result<GJEquationSet> {
    let d = geo.d;
    if d < 3 {
        return Err(Error::WeylDimension(d));
    }
    let df_ = d as f64;
    let (_, ric) = geo.need_curvature()?;
    let c = geo.weyl.as_ref().expect("d ≥ 3");
    let alg = Algebra::new(geo);
    let g = &geo.g;
    let s = geo.s;

    // Weyl condition
    let t: Vec<f64> = (0..d * d).map(|i| alg.ff[i] - alg.f2 * g[i] / (2.0 * (df_ - 1.0))).collect();
    let gt = alg.g_wedge(g, &t);
    let coef = 3.0 / (2.0 * (df_ - 2.0));
    let w: Vec<f64> = (0..d * d * d * d).map(|i| c.data()[i] + alg.t1[i] - coef * gt[i]).collect();
    let w_scale = s.riemann().max(max_abs(&alg.t1)).max(coef * max_abs(&gt));

    // traceless Ricci condition
    let mut rb = vec![0.0; d * d];
    let c1 = (df_ + 1.0) / 4.0;
    for i in 0..d * d {
        rb[i] = ric.data()[i] - geo.scalar * g[i] / df_ - c1 * (alg.ff[i] - alg.f2 * g[i] / df_);
    }
    let rb_scale = s
        .curv()
        .max(libm::fabs(geo.scalar) * s.g / df_)
        .max(c1 * max_abs(&alg.ff))
        .max(c1 * libm::fabs(alg.f2) * s.g / df_);

    // field condition
    let df = geo.df()?;
    let div = geo.divergence(&df);
    let mut rc = vec![0.0; d * d * d];
    let cc = 1.0 / (df_ - 1.0);
    for k in 0..d {
        for m in 0..d {
            for n in 0..d {
                rc[(k * d + m) * d + n] =
                    df.get(&[k, m, n]).value() + cc * (g[k * d + m] * div[n].value() - g[k * d + n] * div[m].value());
            }
        }
    }
    let div_max = div.iter().fold(0.0f64, |acc, j| acc.max(libm::fabs(j.value())));
    let rc_scale = s.df().max(cc * s.g * div_max);

    Ok(GJEquationSet {
        weyl: Residual::new(tensor(4, d, w), w_scale),
        ricci: Residual::new(tensor(2, d, rb), rb_scale),
        field: Residual::new(tensor(3, d, rc), rc_scale),
    })
}

/// Residuals of the Riemann, Ricci and scalar curvature identities.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureIdentities {
    pub riemann: Residual,
    pub ricci: Residual,
    pub scalar: Residual,
}

/// The Riemann tensor the identities predict, as plain values, with its
/// summand scale.
fn predicted_riemann(geo: &PointGeometry, alg: &Algebra, k: f64) -> (Vec<f64>, f64) {
    let d = geo.d;
    let g = &geo.g;
    let mut gg = vec![0.0; d * d * d * d];
    for m in 0..d {
        for n in 0..d {
            for kk in 0..d {
                for l in 0..d {
                    gg[((m * d + n) * d + kk) * d + l] =
                        0.5 * (g[m * d + l] * g[kk * d + n] - g[m * d + kk] * g[l * d + n]);
                }
            }
        }
    }
    let a = alg.g_wedge(g, &alg.ff);
    let c = 2.0 * (k + alg.f2 / 8.0);
    let r: Vec<f64> = (0..gg.len()).map(|i| c * gg[i] - 0.5 * a[i] - alg.t1[i]).collect();
    let scale = (libm::fabs(c) * max_abs(&gg)).max(0.5 * max_abs(&a)).max(max_abs(&alg.t1));
    (r, scale)
}

/// Residuals of the curvature identities for a given constant `k`.
pub fn curvature_identity_residual(
    g: &SmoothField,
    a: &SmoothField,
    k: f64,
    p: &ChartPoint,
) -> Result<CurvatureIdentities> {
    let geo = PointGeometry::new(g, a, p, 2, 1)?;
    curvature_identities_from(&geo, k)
}

pub(crate) fn curvature_identities_from(geo: &PointGeometry, k: f64) -> Result<CurvatureIdentities> {
    let d = geo.d;
    let df_ = d as f64;
    let (riem, ric) = geo.need_curvature()?;
    let alg = Algebra::new(geo);
    let s = geo.s;
    let g = &geo.g;

    let (pred, pred_scale) = predicted_riemann(geo, &alg, k);
    let ra: Vec<f64> = riem.data().iter().zip(&pred).map(|(x, y)| x - y).collect();

    let (c0, c1, c2) = ((df_ - 1.0) * k, (df_ + 1.0) / 8.0 * alg.f2, (df_ + 1.0) / 4.0);
    let rb: Vec<f64> = (0..d * d).map(|i| ric.data()[i] - (c0 * g[i] + c1 * g[i] + c2 * alg.ff[i])).collect();
    let rb_scale = s.curv().max(libm::fabs(c0) * s.g).max(libm::fabs(c1) * s.g).max(c2 * max_abs(&alg.ff));

    let (e0, e1) = (df_ * (df_ - 1.0) * k, (df_ + 1.0) * (df_ + 2.0) * alg.f2 / 8.0);
    let rc = geo.scalar - (e0 + e1);
    let rc_scale = s.scalar().max(libm::fabs(e0)).max(libm::fabs(e1));

    Ok(CurvatureIdentities {
        riemann: Residual::new(tensor(4, d, ra), s.riemann().max(pred_scale)),
        ricci: Residual::new(tensor(2, d, rb), rb_scale),
        scalar: Residual::scalar(rc, rc_scale),
    })
}

/// Curvature constant recovered from the scalar identity over a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KEstimate {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl KEstimate {
    /// `max − min`, the constancy diagnostic.
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

pub(crate) fn k_at(geo: &PointGeometry) -> Result<f64> {
    geo.need_curvature()?;
    let df_ = geo.d as f64;
    Ok((geo.scalar - (df_ + 1.0) * (df_ + 2.0) * geo.f_squared() / 8.0) / (df_ * (df_ - 1.0)))
}

/// `k̂ = (R − (d+1)(d+2) F²/8) / (d(d−1))` averaged over `points`.
pub fn estimate_k(g: &SmoothField, a: &SmoothField, points: &[ChartPoint]) -> Result<KEstimate> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let (mut sum, mut lo, mut hi) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        let geo = PointGeometry::new(g, a, p, 2, 1)?;
        let k = k_at(&geo)?;
        sum += k;
        lo = lo.min(k);
        hi = hi.max(k);
    }
    Ok(KEstimate { mean: sum / points.len() as f64, min: lo, max: hi, points: points.len() })
}

/// Residuals of the traceless and kink equations.
#[derive(Clone, Debug, PartialEq)]
pub struct TracelessKink {
    pub traceless: Residual,
    pub kink: Residual,
}

/// `D_μ D_κ F_ν^κ` `[μ][ν]` and `D² F_{μν}` as values.
fn second_derivatives(geo: &PointGeometry) -> Result<(TensorValue, TensorValue)> {
    let d = geo.d;
    let df = geo.df()?;
    let div = geo.divergence(&df);
    let div_t: JetTensor = Tensor::from_data(Valence::new(1, 0), d, div)?;
    let ddiv = geo.conn.covariant(&div_t)?;
    let ddf = geo.conn.covariant(&df)?;
    let ginv = &geo.ginv;
    let mut lap = TensorValue::zeros(Valence::new(2, 0), d);
    for m in 0..d {
        for n in 0..d {
            let mut acc = 0.0;
            for a in 0..d {
                for b in 0..d {
                    acc += ginv[a * d + b] * ddf.get(&[a, b, m, n]).value();
                }
            }
            lap.set(&[m, n], acc);
        }
    }
    Ok((crate::curvature::values(&ddiv), lap))
}

/// Residuals of `(1/(d−1)) D_μ D_κ F_ν^κ + ½ D² F_{μν}` and of
/// `½ D² F_{μν} + (k + F²/8) F_{μν} − ¼ F_μ^κ F_κ^λ F_{λν}`.
pub fn traceless_kink_residual(g: &SmoothField, a: &SmoothField, k: f64, p: &ChartPoint) -> Result<TracelessKink> {
    let geo = PointGeometry::new(g, a, p, 2, 3)?;
    traceless_kink_from(&geo, k)
}

pub(crate) fn traceless_kink_from(geo: &PointGeometry, k: f64) -> Result<TracelessKink> {
    let d = geo.d;
    let df_ = d as f64;
    let (ddiv, lap) = second_derivatives(geo)?;
    let s = geo.s;
    let ddf_scale = s.ddf() * s.ginv;
    let f = &geo.fv;
    let ginv = &geo.ginv;

    let mut r13 = TensorValue::zeros(Valence::new(2, 0), d);
    for m in 0..d {
        for n in 0..d {
            r13.set(&[m, n], ddiv.get(&[m, n]) / (df_ - 1.0) + 0.5 * lap.get(&[m, n]));
        }
    }

    // F_μ^κ with the contravariant slot last
    let mut fm = vec![0.0; d * d];
    for m in 0..d {
        for kk in 0..d {
            fm[m * d + kk] = (0..d).map(|x| f[m * d + x] * ginv[x * d + kk]).sum();
        }
    }
    let c = k + geo.f_squared() / 8.0;
    let mut cube = vec![0.0; d * d];
    for m in 0..d {
        for n in 0..d {
            let mut acc = 0.0;
            for kk in 0..d {
                for l in 0..d {
                    acc += fm[m * d + kk] * fm[kk * d + l] * f[l * d + n];
                }
            }
            cube[m * d + n] = acc;
        }
    }
    let mut r14 = TensorValue::zeros(Valence::new(2, 0), d);
    for i in 0..d * d {
        r14.data_mut()[i] = 0.5 * lap.data()[i] + c * f[i] - 0.25 * cube[i];
    }
    let kink_scale = ddf_scale.max(libm::fabs(c) * s.f).max(0.25 * max_abs(&cube));
    Ok(TracelessKink { traceless: Residual::new(r13, ddf_scale), kink: Residual::new(r14, kink_scale) })
}

/// The vector `K_μ = D_ν F_μ^ν / (d−1)` and its Killing-equation residual.
#[derive(Clone, Debug, PartialEq)]
pub struct KillingCheck {
    pub vector: Vec<f64>,
    pub residual: Residual,
}

/// Killing residual `D_μ K_ν + D_ν K_μ` of the field-strength divergence.
pub fn killing_check(g: &SmoothField, a: &SmoothField, p: &ChartPoint) -> Result<KillingCheck> {
    let geo = PointGeometry::new(g, a, p, 2, 3)?;
    killing_from(&geo)
}

pub(crate) fn killing_from(geo: &PointGeometry) -> Result<KillingCheck> {
    let d = geo.d;
    let df_ = d as f64;
    let df = geo.df()?;
    let k: Vec<Jet> = geo.divergence(&df).iter().map(|j| j.scale(1.0 / (df_ - 1.0))).collect();
    let vector = k.iter().map(|j| j.value()).collect();
    let kt: JetTensor = Tensor::from_data(Valence::new(1, 0), d, k)?;
    let dk = geo.conn.covariant(&kt)?;
    let mut sym = TensorValue::zeros(Valence::new(2, 0), d);
    for m in 0..d {
        for n in 0..d {
            sym.set(&[m, n], dk.get(&[m, n]).value() + dk.get(&[n, m]).value());
        }
    }
    let s = geo.s;
    Ok(KillingCheck { vector, residual: Residual::new(sym, s.ddf() * s.ginv / (df_ - 1.0)) })
}

/// Cyclic sum `D_ξ R_{μνκλ} + D_ν R_{ξμκλ} + D_μ R_{νξκλ}` with `R` the
/// Riemann tensor predicted by the curvature identities for constant `k`.
///
/// It vanishes whenever the field condition holds, so it checks that the
/// identities are integrable rather than the metric itself.
pub fn bianchi_residual(g: &SmoothField, a: &SmoothField, k: f64, p: &ChartPoint) -> Result<Residual> {
    let geo = PointGeometry::new(g, a, p, 1, 2)?;
    bianchi_from(&geo, k)
}

pub(crate) fn bianchi_from(geo: &PointGeometry, k: f64) -> Result<Residual> {
    let d = geo.d;
    let gj = geo.conn.metric();
    let ginv = geo.conn.inverse_metric();
    let f = &geo.f;
    let order = f.data()[0].order().min(gj[0].order()).min(1);
    if order < 1 {
        return Err(Error::Unsupported("Bianchi check needs first derivatives of F and g".into()));
    }
    let gj: Vec<Jet> = gj.iter().map(|j| j.truncate(order)).collect();
    let ginv: Vec<Jet> = ginv.iter().map(|j| j.truncate(order)).collect();
    let fj: Vec<Jet> = f.data().iter().map(|j| j.truncate(order)).collect();
    let zero = Jet::zero(d, order);

    // F², F_μκ F_ν^κ as jets
    let mut fup = vec![zero.clone(); d * d]; // F_m^k
    for m in 0..d {
        for kk in 0..d {
            let mut acc = zero.clone();
            for x in 0..d {
                acc.add_mul(&fj[m * d + x], &ginv[x * d + kk]);
            }
            fup[m * d + kk] = acc;
        }
    }
    let mut ff = vec![zero.clone(); d * d];
    let mut f2 = zero.clone();
    for m in 0..d {
        for n in 0..d {
            let mut acc = zero.clone();
            for kk in 0..d {
                acc.add_mul(&fj[m * d + kk], &fup[n * d + kk]);
            }
            ff[m * d + n] = acc;
        }
    }
    for m in 0..d {
        for n in 0..d {
            f2.add_mul(&ginv[m * d + n], &ff[m * d + n]);
        }
    }
    let mut c = f2.scale(0.25);
    c.data_mut()[0] += 2.0 * k;

    let mut r = Tensor::filled(Valence::new(4, 0), d, zero.clone());
    for m in 0..d {
        for n in 0..d {
            for kk in 0..d {
                for l in 0..d {
                    let mut acc = zero.clone();
                    // c · ½ (g_ml g_kn − g_mk g_ln)
                    let mut gg = &gj[m * d + l] * &gj[kk * d + n];
                    gg.add_mul_scaled(-1.0, &gj[m * d + kk], &gj[l * d + n]);
                    acc.add_mul_scaled(0.5, &c, &gg);
                    // −½ [½(g_mk FF_ln − g_ml FF_kn) − ½(g_nk FF_lm − g_nl FF_km)]
                    acc.add_mul_scaled(-0.25, &gj[m * d + kk], &ff[l * d + n]);
                    acc.add_mul_scaled(0.25, &gj[m * d + l], &ff[kk * d + n]);
                    acc.add_mul_scaled(0.25, &gj[n * d + kk], &ff[l * d + m]);
                    acc.add_mul_scaled(-0.25, &gj[n * d + l], &ff[kk * d + m]);
                    // −½ F_mn F_kl + ¼ (F_mk F_ln − F_ml F_kn)
                    acc.add_mul_scaled(-0.5, &fj[m * d + n], &fj[kk * d + l]);
                    acc.add_mul_scaled(0.25, &fj[m * d + kk], &fj[l * d + n]);
                    acc.add_mul_scaled(-0.25, &fj[m * d + l], &fj[kk * d + n]);
                    r.set(&[m, n, kk, l], acc);
                }
            }
        }
    }
    let dr = geo.conn.covariant(&r)?;
    let mut out = TensorValue::zeros(Valence::new(5, 0), d);
    for x in 0..d {
        for m in 0..d {
            for n in 0..d {
                for kk in 0..d {
                    for l in 0..d {
                        let v = dr.get(&[x, m, n, kk, l]).value()
                            + dr.get(&[n, x, m, kk, l]).value()
                            + dr.get(&[m, n, x, kk, l]).value();
                        out.set(&[x, m, n, kk, l], v);
                    }
                }
            }
        }
    }
    let rv: Vec<f64> = r.data().iter().map(|j| j.value()).collect();
    let dmax = super::geometry::partial_max(r.data(), 1);
    let scale = dmax.max(geo.s.gamma * max_abs(&rv));
    Ok(Residual::new(out, scale))
}
