use alloc::vec::Vec;

use crate::curvature::{gauge_curvature, values, weyl_from, Connection, JetTensor};
use crate::error::{Error, Result};
use crate::field::{jet_tensor, SmoothField};
use crate::jet::Jet;
use crate::tensor::{ChartPoint, TensorValue, Valence};

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| f64::max(m, libm::fabs(*x)))
}

/// Largest `n`-th partial over a set of jets (0 if the order is too low).
pub(crate) fn partial_max(jets: &[Jet], n: usize) -> f64 {
    let mut m: f64 = 0.0;
    for j in jets {
        if j.order() < n {
            return 0.0;
        }
        let d = j.dim();
        match n {
            0 => m = m.max(libm::fabs(j.value())),
            1 => (0..d).for_each(|i| m = m.max(libm::fabs(j.first(i)))),
            2 => (0..d).for_each(|i| (0..d).for_each(|k| m = m.max(libm::fabs(j.second(i, k))))),
            _ => (0..d).for_each(|i| (0..d).for_each(|k| (0..d).for_each(|l| m = m.max(libm::fabs(j.third(i, k, l)))))),
        }
    }
    m
}

/// Jets of a metric and a gauge potential around one point, with the
/// curvature values and the magnitude scales the residuals are judged by.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub(crate) d: usize,
    pub(crate) conn: Connection,
    pub(crate) g: Vec<f64>,
    pub(crate) ginv: Vec<f64>,
    /// `F_{μν}` jets, one order below the potential.
    pub(crate) f: JetTensor,
    pub(crate) fv: Vec<f64>,
    /// Lowered Riemann, Ricci, scalar, Weyl values (metric order ≥ 2).
    pub(crate) riemann: Option<TensorValue>,
    pub(crate) ricci: Option<TensorValue>,
    pub(crate) scalar: f64,
    pub(crate) weyl: Option<TensorValue>,
    pub(crate) s: Scales,
}

/// Magnitudes of the building blocks at the point.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Scales {
    pub g: f64,
    pub ginv: f64,
    pub gamma: f64,
    pub dgamma: f64,
    pub f: f64,
    pub df: f64,
    pub ddf: f64,
}

impl Scales {
    /// Summands of `R_{μνκ}^λ`.
    pub fn curv(&self) -> f64 {
        self.dgamma.max(self.gamma * self.gamma)
    }
    /// Summands of `R_{μνκλ}`.
    pub fn riemann(&self) -> f64 {
        self.curv() * self.g
    }
    /// Summands of `R`.
    pub fn scalar(&self) -> f64 {
        self.curv() * self.ginv
    }
    /// Summands of `D F`.
    pub fn df(&self) -> f64 {
        self.df.max(self.gamma * self.f)
    }
    /// Summands of `D D F`.
    pub fn ddf(&self) -> f64 {
        self.ddf.max(self.gamma * self.df).max(self.dgamma * self.f).max(self.gamma * self.gamma * self.f)
    }
}

impl PointGeometry {
    /// Evaluate with metric jets of `g_order` and potential jets of `a_order`.
    pub fn new(g: &SmoothField, a: &SmoothField, p: &ChartPoint, g_order: usize, a_order: usize) -> Result<Self> {
        if a.valence() != Valence::new(1, 0) {
            return Err(Error::Unsupported("gauge potential must be a covector field".into()));
        }
        if a.dim() != g.dim() {
            return Err(Error::DimensionMismatch { expected: g.dim(), got: a.dim() });
        }
        if a_order == 0 {
            return Err(Error::Unsupported("gauge curvature needs potential jets of order ≥ 1".into()));
        }
        let conn = Connection::new(g, p, g_order)?;
        let aj = jet_tensor(a, p, a_order)?;
        let f = gauge_curvature(&aj)?;
        Ok(Self::from_parts(conn, f))
    }

    pub(crate) fn from_parts(conn: Connection, f: JetTensor) -> Self {
        let d = conn.dim();
        let g: Vec<f64> = conn.metric().iter().map(|j| j.value()).collect();
        let ginv: Vec<f64> = conn.inverse_metric().iter().map(|j| j.value()).collect();
        let fv: Vec<f64> = f.data().iter().map(|j| j.value()).collect();
        let gam = conn.christoffel_tensor();
        let s = Scales {
            g: max_abs(&g),
            ginv: max_abs(&ginv),
            gamma: partial_max(gam.data(), 0),
            dgamma: partial_max(gam.data(), 1),
            f: max_abs(&fv),
            df: partial_max(f.data(), 1),
            ddf: partial_max(f.data(), 2),
        };
        let (riemann, ricci, scalar, weyl) = if conn.metric_order() >= 2 {
            let up = values(&conn.riemann_up().expect("order ≥ 2"));
            let mut low = TensorValue::zeros(Valence::new(4, 0), d);
            let mut ric = TensorValue::zeros(Valence::new(2, 0), d);
            for m in 0..d {
                for n in 0..d {
                    for k in 0..d {
                        for l in 0..d {
                            let mut acc = 0.0;
                            for x in 0..d {
                                acc += up.get(&[m, n, k, x]) * g[x * d + l];
                            }
                            low.set(&[m, n, k, l], acc);
                        }
                        let v = ric.get(&[n, k]) + up.get(&[m, n, k, m]);
                        ric.set(&[n, k], v);
                    }
                }
            }
            let scalar: f64 = ric.data().iter().zip(&ginv).map(|(a, b)| a * b).sum();
            let weyl = if d >= 3 { Some(weyl_from(&g, &low, &ric, scalar)) } else { None };
            (Some(low), Some(ric), scalar, weyl)
        } else {
            (None, None, 0.0, None)
        };
        Self { d, conn, g, ginv, f, fv, riemann, ricci, scalar, weyl, s }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    /// `F_{μν}` values.
    pub fn field_strength(&self) -> TensorValue {
        values(&self.f)
    }

    /// `F_{μν} F^{μν}`.
    pub fn f_squared(&self) -> f64 {
        let d = self.d;
        let mut acc = 0.0;
        for m in 0..d {
            for n in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        acc += self.fv[m * d + n] * self.fv[k * d + l] * self.ginv[m * d + k] * self.ginv[n * d + l];
                    }
                }
            }
        }
        acc
    }

    /// `F_{μκ} F_ν^κ`.
    pub(crate) fn ff(&self) -> Vec<f64> {
        let d = self.d;
        let mut out = alloc::vec![0.0; d * d];
        for m in 0..d {
            for n in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    for l in 0..d {
                        acc += self.fv[m * d + k] * self.fv[n * d + l] * self.ginv[k * d + l];
                    }
                }
                out[m * d + n] = acc;
            }
        }
        out
    }

    /// Scalar curvature, if the metric jets allow it.
    pub fn scalar_curvature(&self) -> Option<f64> {
        self.ricci.as_ref().map(|_| self.scalar)
    }

    pub(crate) fn need_curvature(&self) -> Result<(&TensorValue, &TensorValue)> {
        match (&self.riemann, &self.ricci) {
            (Some(r), Some(c)) => Ok((r, c)),
            _ => Err(Error::Unsupported("curvature needs metric jets of order ≥ 2".into())),
        }
    }

    /// `D_κ F_{μν}` jets `[κ][μ][ν]`.
    pub(crate) fn df(&self) -> Result<JetTensor> {
        self.conn.covariant(&self.f)
    }

    /// `D_κ F_ν^κ = g^{κλ} D_κ F_{νλ}` from `D F` jets.
    pub(crate) fn divergence(&self, df: &JetTensor) -> Vec<Jet> {
        let d = self.d;
        let order = df.data()[0].order().min(self.conn.inverse_metric()[0].order());
        let ginv = self.conn.inverse_metric();
        (0..d)
            .map(|n| {
                let mut acc = Jet::zero(d, order);
                for l in 0..d {
                    for m in 0..d {
                        acc.add_mul(&ginv[l * d + m], df.get(&[l, n, m]));
                    }
                }
                acc
            })
            .collect()
    }
}
