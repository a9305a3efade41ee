//! Closed-form component functions the catalog is assembled from.
//!
//! Every form is written once over [`Scalar`]; compositions call into their
//! parts through `S::eval_field`, so derivatives stay exact through assembly.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::{ClosedForm, ComponentFn};
use crate::scalar::Scalar;

use super::block::CanonicalStructure;

pub(crate) type Dyn = Arc<dyn ComponentFn>;

fn quad<S: Scalar>(eta: &[f64], x: &[S]) -> S {
    let mut q = S::zero();
    for (e, &xi) in eta.iter().zip(x) {
        q = q + xi.square().scale(*e);
    }
    q
}

/// `η / (1 + (k/4) η_{κλ} x^κ x^λ)²` with diagonal `η`.
pub(crate) struct ConformalReal {
    pub eta: Vec<f64>,
    pub k: f64,
}

impl ClosedForm for ConformalReal {
    fn dim(&self) -> usize {
        self.eta.len()
    }
    fn len(&self) -> usize {
        self.eta.len() * self.eta.len()
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let n = self.eta.len();
        let den = S::one() + quad(&self.eta, x).scale(self.k / 4.0);
        let w = den.square().recip();
        for o in out.iter_mut() {
            *o = S::zero();
        }
        for i in 0..n {
            out[i * n + i] = w.scale(self.eta[i]);
        }
    }
}

fn cpx_metric<S: Scalar>(s: &CanonicalStructure, c: f64, x: &[S], out: &mut [S]) {
    let d = s.dim();
    let eta = s.eta_diag();
    let q = quad(eta, x);
    let ex: Vec<S> = (0..d).map(|i| x[i].scale(eta[i])).collect();
    let mut lx = vec![S::zero(); d];
    for (i, li) in lx.iter_mut().enumerate() {
        for (j, xj) in x.iter().enumerate().take(d) {
            let e = s.eps_low(i, j);
            if e != 0.0 {
                *li = *li + xj.scale(e);
            }
        }
    }
    let den = S::one() + q.scale(c);
    let w = den.square().recip();
    let sigma = s.sigma();
    for i in 0..d {
        for j in 0..d {
            let mut v = ex[i] * ex[j] + (lx[i] * lx[j]).scale(sigma);
            v = -v;
            if i == j {
                v = v + q.scale(eta[i]);
            }
            let mut b = v.scale(c);
            if i == j {
                b = b + S::cst(eta[i]);
            }
            out[i * d + j] = b * w;
        }
    }
}

/// Space form of constant (para-)holomorphic sectional curvature `4c` in the
/// canonical chart centred at the origin.
pub(crate) struct CpxMetric {
    pub s: CanonicalStructure,
    pub c: f64,
}

impl ClosedForm for CpxMetric {
    fn dim(&self) -> usize {
        self.s.dim()
    }
    fn len(&self) -> usize {
        self.s.dim() * self.s.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        cpx_metric(&self.s, self.c, x, out);
    }
}

/// `scale · ½ (1 + c q) ε_μ^ν g_{νκ} x^κ`, whose curvature is `scale · J`.
pub(crate) struct CpxPotential {
    pub s: CanonicalStructure,
    pub c: f64,
    pub scale: f64,
}

impl ClosedForm for CpxPotential {
    fn dim(&self) -> usize {
        self.s.dim()
    }
    fn len(&self) -> usize {
        self.s.dim()
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let d = self.s.dim();
        let mut g = vec![S::zero(); d * d];
        cpx_metric(&self.s, self.c, x, &mut g);
        let q = quad(self.s.eta_diag(), x);
        let pre = (S::one() + q.scale(self.c)).scale(0.5 * self.scale);
        let mut gx = vec![S::zero(); d];
        for i in 0..d {
            for j in 0..d {
                gx[i] = gx[i] + g[i * d + j] * x[j];
            }
        }
        for (m, o) in out.iter_mut().enumerate() {
            let mut acc = S::zero();
            for (n, gxn) in gx.iter().enumerate() {
                let e = self.s.eps_up(m, n);
                if e != 0.0 {
                    acc = acc + gxn.scale(e);
                }
            }
            *o = pre * acc;
        }
    }
}

/// Kink metric `sign · diag(−k² sech⁴(√(k/2) ξ¹), 1)`.
pub(crate) struct KinkMetric {
    pub k: f64,
    pub sign: f64,
}

impl ClosedForm for KinkMetric {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        4
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let a = libm::sqrt(self.k / 2.0);
        let s2 = x[1].scale(a).sech().square();
        out[0] = s2.square().scale(-self.k * self.k * self.sign);
        out[1] = S::zero();
        out[2] = S::zero();
        out[3] = S::cst(self.sign);
    }
}

/// `(sign · k sech²(√(k/2) ξ¹), 0)`
pub(crate) struct KinkPotential {
    pub k: f64,
    pub sign: f64,
}

impl ClosedForm for KinkPotential {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        2
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let a = libm::sqrt(self.k / 2.0);
        out[0] = x[1].scale(a).sech().square().scale(self.sign * self.k);
        out[1] = S::zero();
    }
}

/// `sign · √(2k) tanh(√(k/2) ξ¹)`
pub(crate) struct KinkProfile {
    pub k: f64,
    pub sign: f64,
}

impl ClosedForm for KinkProfile {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        1
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let a = libm::sqrt(self.k / 2.0);
        out[0] = x[1].scale(a).tanh().scale(self.sign * libm::sqrt(2.0 * self.k));
    }
}

/// `sign · 4k tanh²(√(k/2) ξ¹)`
pub(crate) struct KinkWarp {
    pub k: f64,
    pub sign: f64,
}

impl ClosedForm for KinkWarp {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        1
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let a = libm::sqrt(self.k / 2.0);
        out[0] = x[1].scale(a).tanh().square().scale(4.0 * self.k * self.sign);
    }
}

/// c-kink external metric `diag(−2K³ sech⁴ tanh² / (2K tanh² + L), 1)`.
pub(crate) struct CKinkMetric {
    pub big_k: f64,
    pub big_l: f64,
}

impl ClosedForm for CKinkMetric {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        4
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let kk = self.big_k;
        let b = x[1].scale(libm::sqrt(kk / 2.0));
        let t2 = b.tanh().square();
        let s4 = b.sech().square().square();
        let den = t2.scale(2.0 * kk) + S::cst(self.big_l);
        out[0] = (s4 * t2 / den).scale(-2.0 * kk * kk * kk);
        out[1] = S::zero();
        out[2] = S::zero();
        out[3] = S::one();
    }
}

/// `sign · √(2K tanh² + L)`
pub(crate) struct CKinkProfile {
    pub big_k: f64,
    pub big_l: f64,
    pub sign: f64,
}

impl ClosedForm for CKinkProfile {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        1
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let t2 = x[1].scale(libm::sqrt(self.big_k / 2.0)).tanh().square();
        out[0] = (t2.scale(2.0 * self.big_k) + S::cst(self.big_l)).sqrt().scale(self.sign);
    }
}

/// Off-diagonal potential `a¹ = (sign · K √(2τL) / (2(2K+L) cosh² − 4K), 0)`.
pub(crate) struct CKinkOffDiagonal {
    pub big_k: f64,
    pub big_l: f64,
    pub tau: f64,
    pub sign: f64,
}

impl ClosedForm for CKinkOffDiagonal {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        2
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let kk = self.big_k;
        let ll = self.big_l;
        let c2 = x[1].scale(libm::sqrt(kk / 2.0)).cosh().square();
        let den = c2.scale(2.0 * (2.0 * kk + ll)) - S::cst(4.0 * kk);
        out[0] = den.recip().scale(self.sign * kk * libm::sqrt(2.0 * self.tau * ll));
        out[1] = S::zero();
    }
}

/// Warp `−2τ (2K tanh² + L)`, i.e. `τ F²` of the external field.
pub(crate) struct CKinkWarp {
    pub big_k: f64,
    pub big_l: f64,
    pub tau: f64,
}

impl ClosedForm for CKinkWarp {
    fn dim(&self) -> usize {
        2
    }
    fn len(&self) -> usize {
        1
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let t2 = x[1].scale(libm::sqrt(self.big_k / 2.0)).tanh().square();
        out[0] = (t2.scale(2.0 * self.big_k) + S::cst(self.big_l)).scale(-2.0 * self.tau);
    }
}

/// Constant components over `dim` coordinates.
pub(crate) struct Constant {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl ClosedForm for Constant {
    fn dim(&self) -> usize {
        self.dim
    }
    fn len(&self) -> usize {
        self.values.len()
    }
    fn eval<S: Scalar>(&self, _x: &[S], out: &mut [S]) {
        for (o, v) in out.iter_mut().zip(&self.values) {
            *o = S::cst(*v);
        }
    }
}

/// `inner` evaluated on the coordinate window `x[start .. start + inner.dim()]`
/// of a `total`-dimensional chart.
pub(crate) struct OnSlice {
    pub inner: Dyn,
    pub start: usize,
    pub total: usize,
}

impl ClosedForm for OnSlice {
    fn dim(&self) -> usize {
        self.total
    }
    fn len(&self) -> usize {
        self.inner.len()
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let m = self.inner.dim();
        S::eval_field(&*self.inner, &x[self.start..self.start + m], out);
    }
}

/// A covector on the first `inner.dim()` coordinates, zero-padded to `total`.
pub(crate) struct PaddedCovector {
    pub inner: Dyn,
    pub total: usize,
}

impl ClosedForm for PaddedCovector {
    fn dim(&self) -> usize {
        self.total
    }
    fn len(&self) -> usize {
        self.total
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let r = self.inner.dim();
        for o in out.iter_mut() {
            *o = S::zero();
        }
        S::eval_field(&*self.inner, &x[..r], &mut out[..r]);
    }
}

/// Block metric
///
/// ```text
/// g_{αβ} + a_α^i a_β^j h_{ij}   a_α^k h_{kj}
/// a_β^k h_{ik}                  h_{ij}
/// ```
///
/// with `h = λ c`; every part is a function of all `r + n` coordinates.
/// `a` is stored `[α][i]`.
pub(crate) struct BlockAssembly {
    pub r: usize,
    pub n: usize,
    pub ext: Dyn,
    pub warp: Dyn,
    pub internal: Dyn,
    pub a: Option<Dyn>,
}

impl ClosedForm for BlockAssembly {
    fn dim(&self) -> usize {
        self.r + self.n
    }
    fn len(&self) -> usize {
        (self.r + self.n) * (self.r + self.n)
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        let (r, n) = (self.r, self.n);
        let d = r + n;
        let mut ext = vec![S::zero(); r * r];
        S::eval_field(&*self.ext, x, &mut ext);
        let mut lam = [S::zero()];
        S::eval_field(&*self.warp, x, &mut lam);
        let mut h = vec![S::zero(); n * n];
        S::eval_field(&*self.internal, x, &mut h);
        for v in h.iter_mut() {
            *v = *v * lam[0];
        }
        for o in out.iter_mut() {
            *o = S::zero();
        }
        for i in 0..n {
            for j in 0..n {
                out[(r + i) * d + r + j] = h[i * n + j];
            }
        }
        for al in 0..r {
            for be in 0..r {
                out[al * d + be] = ext[al * r + be];
            }
        }
        let Some(af) = &self.a else { return };
        let mut a = vec![S::zero(); r * n];
        S::eval_field(&**af, x, &mut a);
        // ah[α][j] = a_α^k h_{kj}
        let mut ah = vec![S::zero(); r * n];
        for al in 0..r {
            for j in 0..n {
                let mut acc = S::zero();
                for k in 0..n {
                    acc = acc + a[al * n + k] * h[k * n + j];
                }
                ah[al * n + j] = acc;
            }
        }
        for al in 0..r {
            for j in 0..n {
                out[al * d + r + j] = ah[al * n + j];
                out[(r + j) * d + al] = ah[al * n + j];
            }
            for be in 0..r {
                let mut acc = S::zero();
                for j in 0..n {
                    acc = acc + ah[al * n + j] * a[be * n + j];
                }
                out[al * d + be] = out[al * d + be] + acc;
            }
        }
    }
}
