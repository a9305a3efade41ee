use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{ComponentFn, ScaledFn, SmoothField};
use crate::tensor::{SignatureMatrix, Valence};

use super::block::{BlockMetric, CanonicalStructure};
use super::forms::{
    CKinkMetric, CKinkOffDiagonal, CKinkProfile, CKinkWarp, ConformalReal, Constant, CpxMetric, CpxPotential, Dyn,
    KinkMetric, KinkPotential, KinkProfile, KinkWarp, OnSlice, PaddedCovector,
};
use super::{Centrifugal, Domain, Expected, Family, KahlerFactor, KinkData, Params, Predicate, SolutionInstance};

const DENOMINATOR_FLOOR: f64 = 0.1;
const COLLAR: f64 = 0.05;
const GAP_MARGIN: f64 = 0.05;

fn invalid<T>(msg: impl Into<alloc::string::String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}

fn sign_of(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Half-width of a sampling box around the origin of a conformal chart whose
/// denominator is `1 + c q`, `q` a quadratic form in `n` coordinates.
fn conformal_half_width(c: f64, n: usize) -> f64 {
    let c = libm::fabs(c);
    if c == 0.0 {
        return 1.5;
    }
    f64::min(1.5, 0.6 / libm::sqrt(c * n as f64))
}

fn quad(eta: &[f64], x: &[f64]) -> f64 {
    eta.iter().zip(x).map(|(e, v)| e * v * v).sum()
}

fn covector(f: Dyn) -> Result<SmoothField> {
    SmoothField::new(Valence::new(1, 0), f)
}

fn metric(f: Dyn) -> Result<SmoothField> {
    SmoothField::new(Valence::new(0, 2), f)
}

fn eta_of(n: usize, s: usize) -> Result<Vec<f64>> {
    let sig = SignatureMatrix::new(n, s)?;
    Ok((0..n).map(|i| sig.entry(i)).collect())
}

fn zero_covector(d: usize) -> Result<SmoothField> {
    covector(Arc::new(Constant { dim: d, values: vec![0.0; d] }))
}

pub(crate) fn negate_block(b: &BlockMetric) -> BlockMetric {
    let neg = |f: &Arc<dyn ComponentFn>| -> Arc<dyn ComponentFn> { Arc::new(ScaledFn::new(f.clone(), -1.0)) };
    BlockMetric::from_full_parts(
        b.external_dim(),
        b.internal_dim(),
        neg(b.external_fn()),
        neg(b.warp_fn()),
        b.internal_fn().clone(),
        b.potential_fn().cloned(),
    )
    .expect("negation preserves shapes")
}

/// Real space form of sectional curvature `k`, signature index `s`, in the
/// conformal chart `g = η / (1 + (k/4) η x x)²`, with `A = 0`.
pub fn make_real_space_form(d: usize, s: usize, k: f64) -> Result<SolutionInstance> {
    if d < 2 {
        return invalid(format!("real_space_form needs d ≥ 2, got {d}"));
    }
    if s > d {
        return invalid(format!("real_space_form signature index s={s} must lie in 0..={d}"));
    }
    if !k.is_finite() {
        return invalid("real_space_form curvature k must be finite");
    }
    let eta = eta_of(d, s)?;
    let g = metric(Arc::new(ConformalReal { eta: eta.clone(), k }))?;
    let w = conformal_half_width(k / 4.0, d);
    let pred: Predicate = Arc::new(move |x: &[f64]| libm::fabs(1.0 + k / 4.0 * quad(&eta, x)) >= DENOMINATOR_FLOOR);
    let domain = Domain::new(vec![-w; d], vec![w; d], DENOMINATOR_FLOOR, pred)?;
    Ok(SolutionInstance {
        family: Family::RealSpaceForm,
        params: Params::new().with("d", d as f64).with("s", s as f64).with("k", k),
        g,
        a: zero_covector(d)?,
        domain,
        expected: Expected { k, f2: Some(0.0), rank: 0, nullity: d, signature_index: s, eps_d: 1.0, l2: None },
        block: None,
        kahler: None,
        kink: None,
    })
}

fn check_cpx(rp: usize, s: usize, sigma: f64, f2: f64, who: &str) -> Result<()> {
    if rp == 0 {
        return invalid(format!("{who} needs r' ≥ 1 (even dimension 2r' ≥ 2)"));
    }
    if f2 == 0.0 || !f2.is_finite() {
        return invalid(format!("{who} needs a finite nonzero F²"));
    }
    if sigma != sign_of(f2) {
        return invalid(format!(
            "{who}: σ must equal the sign of F² (complex for F² > 0, para-complex for F² < 0); got σ={sigma}, F²={f2}"
        ));
    }
    if s > rp {
        return invalid(format!("{who}: block signature index s'={s} must lie in 0..={rp}"));
    }
    Ok(())
}

struct CpxParts {
    g: Dyn,
    a: Dyn,
    cs: CanonicalStructure,
    c: f64,
}

/// Space form of holomorphic curvature `h` with potential `scale · A_J`.
fn cpx_parts(rp: usize, s: usize, sigma: f64, h: f64, scale: f64) -> Result<CpxParts> {
    let cs = CanonicalStructure::new(rp, s, sigma)?;
    let c = h / 4.0;
    let g: Dyn = Arc::new(CpxMetric { s: cs.clone(), c });
    let a: Dyn = Arc::new(CpxPotential { s: cs.clone(), c, scale });
    Ok(CpxParts { g, a, cs, c })
}

/// Complex (`σ = +1`) or para-complex (`σ = −1`) space form of dimension
/// `d = 2r'` carrying a covariantly constant field with invariant `F²`.
pub fn make_cpx_space_form(rp: usize, s: usize, sigma: f64, f2: f64) -> Result<SolutionInstance> {
    check_cpx(rp, s, sigma, f2, "cpx_space_form")?;
    let d = 2 * rp;
    let df = d as f64;
    let parts = cpx_parts(rp, s, sigma, f2 / df, libm::sqrt(libm::fabs(f2) / df))?;
    let g = metric(parts.g.clone())?;
    let a = covector(parts.a.clone())?;
    let c = parts.c;
    let eta = parts.cs.eta_diag().to_vec();
    let w = conformal_half_width(c, d);
    let pred: Predicate = Arc::new(move |x: &[f64]| libm::fabs(1.0 + c * quad(&eta, x)) >= DENOMINATOR_FLOOR);
    let domain = Domain::new(vec![-w; d], vec![w; d], DENOMINATOR_FLOOR, pred)?;
    let kahler = KahlerFactor { g: g.clone(), potential: a.clone(), sigma, holomorphic: f2 / df };
    Ok(SolutionInstance {
        family: Family::CpxSpaceForm,
        params: Params::new().with("rp", rp as f64).with("s", s as f64).with("sigma", sigma).with("F2", f2),
        g,
        a,
        domain,
        expected: Expected {
            k: -(df + 2.0) * f2 / (8.0 * df),
            f2: Some(f2),
            rank: d,
            nullity: 0,
            signature_index: parts.cs.signature_index(),
            eps_d: 1.0,
            l2: None,
        },
        block: None,
        kahler: Some(kahler),
        kink: None,
    })
}

/// Direct product of a (para-)complex space form of holomorphic curvature
/// `F²/r` with a real space form of sectional curvature `−F²/(4r)`.
pub fn make_product_solution(
    rp: usize,
    s_ext: usize,
    sigma: f64,
    f2: f64,
    n: usize,
    s_int: usize,
) -> Result<SolutionInstance> {
    check_cpx(rp, s_ext, sigma, f2, "product")?;
    if n <= 1 {
        return invalid(format!("product needs an internal dimension n > 1, got {n}"));
    }
    if s_int > n {
        return invalid(format!("product: internal signature index {s_int} must lie in 0..={n}"));
    }
    let r = 2 * rp;
    let rf = r as f64;
    let d = r + n;
    let parts = cpx_parts(rp, s_ext, sigma, f2 / rf, libm::sqrt(libm::fabs(f2) / rf))?;
    let k_int = -f2 / (4.0 * rf);
    let eta_int = eta_of(n, s_int)?;
    let internal: Dyn = Arc::new(ConformalReal { eta: eta_int.clone(), k: k_int });
    let block = BlockMetric::from_full_parts(
        r,
        n,
        Arc::new(OnSlice { inner: parts.g.clone(), start: 0, total: d }),
        Arc::new(Constant { dim: d, values: vec![1.0] }),
        Arc::new(OnSlice { inner: internal, start: r, total: d }),
        None,
    )?;
    let a = covector(Arc::new(PaddedCovector { inner: parts.a.clone(), total: d }))?;
    let c = parts.c;
    let eta_ext = parts.cs.eta_diag().to_vec();
    let (we, wi) = (conformal_half_width(c, r), conformal_half_width(k_int / 4.0, n));
    let pred: Predicate = Arc::new(move |x: &[f64]| {
        libm::fabs(1.0 + c * quad(&eta_ext, &x[..r])) >= DENOMINATOR_FLOOR
            && libm::fabs(1.0 + k_int / 4.0 * quad(&eta_int, &x[r..])) >= DENOMINATOR_FLOOR
    });
    let mut lo = vec![-we; r];
    lo.extend(vec![-wi; n]);
    let hi: Vec<f64> = lo.iter().map(|v| -v).collect();
    let domain = Domain::new(lo, hi, DENOMINATOR_FLOOR, pred)?;
    let kahler = KahlerFactor { g: metric(parts.g)?, potential: covector(parts.a)?, sigma, holomorphic: f2 / rf };
    Ok(SolutionInstance {
        family: Family::Product,
        params: Params::new()
            .with("rp", rp as f64)
            .with("s", s_ext as f64)
            .with("sigma", sigma)
            .with("F2", f2)
            .with("n", n as f64)
            .with("s_int", s_int as f64),
        g: block.metric().clone(),
        a,
        domain,
        expected: Expected {
            k: -(rf + 2.0) * f2 / (8.0 * rf),
            f2: Some(f2),
            rank: r,
            nullity: n,
            signature_index: parts.cs.signature_index() + s_int,
            eps_d: 1.0,
            l2: None,
        },
        block: Some(block),
        kahler: Some(kahler),
        kink: None,
    })
}

/// The two-dimensional kink geometry.
#[derive(Clone)]
pub struct Kink2d {
    pub g: SmoothField,
    pub a: SmoothField,
    pub phi: Arc<dyn ComponentFn>,
    pub k: f64,
    pub anti: bool,
}

impl core::fmt::Debug for Kink2d {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Kink2d").field("k", &self.k).field("anti", &self.anti).finish_non_exhaustive()
    }
}

impl Kink2d {
    /// Constants `(k, σ)` of the kink system for this metric sign.
    pub fn system_constants(&self) -> (f64, f64) {
        if self.anti {
            (-self.k, 1.0)
        } else {
            (self.k, -1.0)
        }
    }

    fn data(&self) -> KinkData {
        let (k, sigma) = self.system_constants();
        KinkData { g2: self.g.clone(), phi: self.phi.clone(), k, sigma, centrifugal: None }
    }
}

/// `g = diag(−k² sech⁴(√(k/2) ξ¹), 1)` with `A = (±k sech², 0)` and profile
/// `φ = ±√(2k) tanh(√(k/2) ξ¹)`; `anti` flips the metric sign.
pub fn make_kink(k: f64, profile_sign: f64, anti: bool) -> Result<Kink2d> {
    if !(k > 0.0) || !k.is_finite() {
        return invalid(format!("kink needs k > 0, got {k}"));
    }
    if profile_sign != 1.0 && profile_sign != -1.0 {
        return invalid("kink profile sign must be +1 or -1");
    }
    let sign = if anti { -1.0 } else { 1.0 };
    Ok(Kink2d {
        g: metric(Arc::new(KinkMetric { k, sign }))?,
        a: covector(Arc::new(KinkPotential { k, sign: profile_sign }))?,
        phi: Arc::new(KinkProfile { k, sign: profile_sign }),
        k,
        anti,
    })
}

/// Kink warped with an `n`-dimensional real space form through
/// `λ = w · 4k tanh²`; `n = 1` gives the three-dimensional kink × ℝ.
fn kink_block_instance(
    family: Family,
    k: f64,
    n: usize,
    s_int: usize,
    warp: f64,
    profile: f64,
    anti: bool,
) -> Result<SolutionInstance> {
    if warp != 1.0 && warp != -1.0 {
        return invalid("warp sign must be +1 or -1");
    }
    if s_int > n {
        return invalid(format!("internal signature index {s_int} must lie in 0..={n}"));
    }
    // Built on the positive extra-coordinate branch, then negated for `anti`.
    let base_warp = if anti { -warp } else { warp };
    let kink = make_kink(k, profile, false)?;
    let d = 2 + n;
    let eta_int = eta_of(n, s_int)?;
    let kappa = if n > 1 { base_warp * 2.0 * k * k } else { 0.0 };
    let internal: Dyn = Arc::new(ConformalReal { eta: eta_int.clone(), k: kappa });
    let ext_fn: Dyn = Arc::new(KinkMetric { k, sign: 1.0 });
    let warp_fn: Dyn = Arc::new(KinkWarp { k, sign: base_warp });
    let block = BlockMetric::from_full_parts(
        2,
        n,
        Arc::new(OnSlice { inner: ext_fn, start: 0, total: d }),
        Arc::new(OnSlice { inner: warp_fn, start: 0, total: d }),
        Arc::new(OnSlice { inner: internal, start: 2, total: d }),
        None,
    )?;
    let a = covector(Arc::new(PaddedCovector { inner: kink.a.component_fn().clone(), total: d }))?;
    let aa = libm::sqrt(k / 2.0);
    let xi_max = 3.0 / aa;
    let wi = conformal_half_width(kappa / 4.0, n);
    let eta_p = eta_int.clone();
    let pred: Predicate = Arc::new(move |x: &[f64]| {
        libm::fabs(libm::tanh(aa * x[1])) >= COLLAR
            && libm::fabs(1.0 + kappa / 4.0 * quad(&eta_p, &x[2..])) >= DENOMINATOR_FLOOR
    });
    let mut lo = vec![-1.0, -xi_max];
    lo.extend(vec![-wi; n]);
    let hi: Vec<f64> = lo.iter().map(|v| -v).collect();
    let domain = Domain::new(lo, hi, COLLAR, pred)?;
    let s_block = if base_warp > 0.0 { s_int } else { n - s_int };
    let mut params = Params::new().with("k", k);
    if family == Family::KinkWarped {
        params = params.with("n", n as f64).with("s_int", s_int as f64);
    }
    let params = params.with("warp", warp).with("profile", profile).with("anti", if anti { 1.0 } else { 0.0 });
    let base = SolutionInstance {
        family,
        params,
        g: block.metric().clone(),
        a,
        domain,
        expected: Expected {
            k,
            f2: None,
            rank: 2,
            nullity: n,
            signature_index: 1 + s_block,
            eps_d: 1.0,
            l2: if n == 1 { Some(0.0) } else { None },
        },
        block: Some(block),
        kahler: None,
        kink: Some(kink.data()),
    };
    Ok(if anti { base.opposite() } else { base })
}

/// Three-dimensional kink × ℝ with warp `±4k tanh²(√(k/2) ξ¹)`.
pub fn make_kink_x_line(k: f64, profile: f64, warp: f64, anti: bool) -> Result<SolutionInstance> {
    kink_block_instance(Family::Kink2, k, 1, 0, warp, profile, anti)
}

/// Kink warped with a real space form of curvature `±2k²`; the curvature
/// sign follows from `warp_sign` and `anti`.
pub fn make_kink_warped(
    k: f64,
    n: usize,
    s_int: usize,
    warp_sign: f64,
    profile: f64,
    anti: bool,
) -> Result<SolutionInstance> {
    if n <= 1 {
        return invalid(format!("kink_warped needs an internal dimension n > 1, got {n}"));
    }
    kink_block_instance(Family::KinkWarped, k, n, s_int, warp_sign, profile, anti)
}

/// Internal curvature sign that pairs with `warp_sign` on a given branch.
pub(crate) fn kink_warped_curvature_sign(warp_sign: f64, anti: bool) -> f64 {
    if anti {
        -warp_sign
    } else {
        warp_sign
    }
}

/// Nullity-one Kaluza-Klein product over a (para-)complex space form with
/// `h₁₁ = λ` and off-diagonal potential `a = (2lr/|F²|) A`.
pub fn make_kk_nullity_one(
    rp: usize,
    s: usize,
    sigma: f64,
    f2: f64,
    l: f64,
    lambda: f64,
    profile: f64,
) -> Result<SolutionInstance> {
    check_cpx(rp, s, sigma, f2, "kk_nullity_one")?;
    if lambda != 1.0 && lambda != -1.0 {
        return invalid("kk_nullity_one: internal metric λ must be +1 or -1");
    }
    if !l.is_finite() {
        return invalid("kk_nullity_one: l must be finite");
    }
    if profile != 1.0 && profile != -1.0 {
        return invalid("kk_nullity_one: profile sign must be +1 or -1");
    }
    let r = 2 * rp;
    let rf = r as f64;
    let d = r + 1;
    let h = f2 / rf + 4.0 * rf * l * l / (lambda * f2);
    let scale = profile * libm::sqrt(libm::fabs(f2) / rf);
    let parts = cpx_parts(rp, s, sigma, h, scale)?;
    let a_off: Dyn = Arc::new(ScaledFn::new(parts.a.clone(), 2.0 * l * rf / libm::fabs(f2)));
    let block = BlockMetric::from_full_parts(
        r,
        1,
        Arc::new(OnSlice { inner: parts.g.clone(), start: 0, total: d }),
        Arc::new(Constant { dim: d, values: vec![lambda] }),
        Arc::new(Constant { dim: d, values: vec![1.0] }),
        Some(Arc::new(OnSlice { inner: a_off, start: 0, total: d })),
    )?;
    let a = covector(Arc::new(PaddedCovector { inner: parts.a.clone(), total: d }))?;
    let c = parts.c;
    let eta = parts.cs.eta_diag().to_vec();
    let w = conformal_half_width(c, r);
    let pred: Predicate = Arc::new(move |x: &[f64]| libm::fabs(1.0 + c * quad(&eta, &x[..r])) >= DENOMINATOR_FLOOR);
    let mut lo = vec![-w; r];
    lo.push(-1.0);
    let hi: Vec<f64> = lo.iter().map(|v| -v).collect();
    let domain = Domain::new(lo, hi, DENOMINATOR_FLOOR, pred)?;
    let kahler = KahlerFactor { g: metric(parts.g)?, potential: covector(parts.a)?, sigma, holomorphic: h };
    let s_ext = parts.cs.signature_index();
    Ok(SolutionInstance {
        family: Family::KkNullityOne,
        params: Params::new()
            .with("rp", rp as f64)
            .with("s", s as f64)
            .with("sigma", sigma)
            .with("F2", f2)
            .with("l", l)
            .with("lambda", lambda)
            .with("profile", profile),
        g: block.metric().clone(),
        a,
        domain,
        expected: Expected {
            k: rf * l * l / (lambda * f2) - (rf + 2.0) * f2 / (8.0 * rf),
            f2: Some(f2),
            rank: r,
            nullity: 1,
            signature_index: s_ext + usize::from(lambda < 0.0),
            eps_d: 1.0,
            l2: Some(l * l),
        },
        block: Some(block),
        kahler: Some(kahler),
        kink: None,
    })
}

/// Location `ξ¹` of the boundary of the excluded gap of a centrifugal c-kink.
pub fn ckink_gap_boundary(big_k: f64, big_l: f64) -> f64 {
    libm::sqrt(2.0 / big_k) * libm::atanh(libm::sqrt(libm::fabs(big_l) / (2.0 * big_k)))
}

/// Three-dimensional centripetal (`τ = +1`) or centrifugal (`τ = −1`) kink
/// deformation.
pub fn make_ckink(big_k: f64, big_l: f64, tau: f64, profile: f64, a_sign: f64, anti: bool) -> Result<SolutionInstance> {
    if !(big_k > 0.0) || !big_k.is_finite() {
        return invalid(format!("ckink3 needs K > 0, got {big_k}"));
    }
    if tau != 1.0 && tau != -1.0 {
        return invalid("ckink3: τ must be +1 (centripetal) or -1 (centrifugal)");
    }
    if !(tau * big_l > 0.0) {
        return invalid(format!(
            "ckink3 requires τ·L > 0: L positive for the centripetal branch τ=+1, negative for the centrifugal branch τ=-1 (got τ={tau}, L={big_l})"
        ));
    }
    if tau < 0.0 && libm::fabs(big_l) >= 2.0 * big_k {
        return invalid(format!(
            "ckink3 centrifugal branch needs |L| < 2K, otherwise the gap swallows the chart (got K={big_k}, L={big_l})"
        ));
    }
    if profile != 1.0 && profile != -1.0 || a_sign != 1.0 && a_sign != -1.0 {
        return invalid("ckink3: sign parameters must be +1 or -1");
    }
    let d = 3;
    let ext: Dyn = Arc::new(CKinkMetric { big_k, big_l });
    let warp: Dyn = Arc::new(CKinkWarp { big_k, big_l, tau });
    let off: Dyn = Arc::new(CKinkOffDiagonal { big_k, big_l, tau, sign: a_sign });
    let block = BlockMetric::from_full_parts(
        2,
        1,
        Arc::new(OnSlice { inner: ext.clone(), start: 0, total: d }),
        Arc::new(OnSlice { inner: warp.clone(), start: 0, total: d }),
        Arc::new(Constant { dim: d, values: vec![1.0] }),
        Some(Arc::new(OnSlice { inner: off, start: 0, total: d })),
    )?;
    let a =
        covector(Arc::new(PaddedCovector { inner: Arc::new(KinkPotential { k: big_k, sign: profile }), total: d }))?;
    let b = libm::sqrt(big_k / 2.0);
    let xi_max = 3.0 / b;
    let (pred, margin): (Predicate, f64) = if tau > 0.0 {
        (Arc::new(move |x: &[f64]| libm::fabs(libm::tanh(b * x[1])) >= COLLAR), COLLAR)
    } else {
        let gap = ckink_gap_boundary(big_k, big_l) + GAP_MARGIN;
        (Arc::new(move |x: &[f64]| libm::fabs(x[1]) > gap), GAP_MARGIN)
    };
    let domain = Domain::new(vec![-1.0, -xi_max, -1.0], vec![1.0, xi_max, 1.0], margin, pred)?;
    let k = big_k + 0.75 * big_l;
    let l2 = 2.0 * tau * (big_k + big_l / 2.0) * (big_k + big_l / 2.0) * big_l;
    let kink = KinkData {
        g2: metric(ext)?,
        phi: Arc::new(CKinkProfile { big_k, big_l, sign: profile }),
        k,
        sigma: -1.0,
        centrifugal: Some(Centrifugal { tau, l2, big_k, big_l, lambda: warp }),
    };
    let base = SolutionInstance {
        family: Family::CKink3,
        params: Params::new()
            .with("K", big_k)
            .with("L", big_l)
            .with("tau", tau)
            .with("profile", profile)
            .with("a_sign", a_sign)
            .with("anti", if anti { 1.0 } else { 0.0 }),
        g: block.metric().clone(),
        a,
        domain,
        expected: Expected {
            k,
            f2: None,
            rank: 2,
            nullity: 1,
            signature_index: 1 + usize::from(tau > 0.0),
            eps_d: 1.0,
            l2: Some(l2),
        },
        block: Some(block),
        kahler: None,
        kink: Some(kink),
    };
    Ok(if anti { base.opposite() } else { base })
}

/// Resolve the branch of a kink family from `anti` and `eps_d`.
fn kink_branch(p: &Params, family: Family) -> Result<bool> {
    let anti = match p.get("anti") {
        None => None,
        Some(0.0) => Some(false),
        Some(1.0) => Some(true),
        Some(v) => return invalid(format!("{family}: `anti` must be 0 or 1, got {v}")),
    };
    let eps = match p.get("eps_d") {
        None => None,
        Some(_) => Some(p.sign("eps_d")? < 0.0),
    };
    match (anti, eps) {
        (Some(a), Some(e)) if a != e => invalid(format!(
            "{family}: anti={} requires eps_d={} (the opposite-metric branch pairs with a negative extra coordinate)",
            u8::from(a),
            if a { -1 } else { 1 }
        )),
        (Some(a), _) => Ok(a),
        (None, Some(e)) => Ok(e),
        (None, None) => Ok(false),
    }
}

pub(crate) fn build(family: Family, p: &Params) -> Result<SolutionInstance> {
    let spec = super::manifest::entry(family);
    let names: Vec<&str> = spec.params.iter().map(|s| s.name).collect();
    p.check_names(family, &names)?;
    let flip = |inst: SolutionInstance| -> Result<SolutionInstance> {
        Ok(if p.sign_or("eps_d", 1.0)? < 0.0 { inst.opposite() } else { inst })
    };
    match family {
        Family::RealSpaceForm => flip(make_real_space_form(p.integer("d")?, p.integer_or("s", 0)?, p.real("k")?)?),
        Family::CpxSpaceForm => {
            let f2 = p.real("F2")?;
            let sigma = p.sign_or("sigma", sign_of(f2))?;
            flip(make_cpx_space_form(p.integer("rp")?, p.integer_or("s", 0)?, sigma, f2)?)
        }
        Family::Product => {
            let f2 = p.real("F2")?;
            let sigma = p.sign_or("sigma", sign_of(f2))?;
            flip(make_product_solution(
                p.integer("rp")?,
                p.integer_or("s", 0)?,
                sigma,
                f2,
                p.integer("n")?,
                p.integer_or("s_int", 0)?,
            )?)
        }
        Family::Kink2 => {
            let anti = kink_branch(p, family)?;
            make_kink_x_line(p.real("k")?, p.sign_or("profile", 1.0)?, p.sign_or("warp", 1.0)?, anti)
        }
        Family::KinkWarped => {
            let anti = kink_branch(p, family)?;
            let warp = p.sign_or("warp", 1.0)?;
            if let Some(ks) = p.get("kint_sign") {
                let want = kink_warped_curvature_sign(warp, anti);
                if ks != want {
                    return invalid(format!(
                        "kink_warped: warp sign {warp} on the {} branch pairs with internal curvature sign {want}, got {ks}",
                        if anti { "opposite-metric" } else { "positive extra-coordinate" }
                    ));
                }
            }
            make_kink_warped(
                p.real("k")?,
                p.integer("n")?,
                p.integer_or("s_int", 0)?,
                warp,
                p.sign_or("profile", 1.0)?,
                anti,
            )
        }
        Family::KkNullityOne => {
            let f2 = p.real("F2")?;
            let sigma = p.sign_or("sigma", sign_of(f2))?;
            flip(make_kk_nullity_one(
                p.integer("rp")?,
                p.integer_or("s", 0)?,
                sigma,
                f2,
                p.real("l")?,
                p.sign_or("lambda", 1.0)?,
                p.sign_or("profile", 1.0)?,
            )?)
        }
        Family::CKink3 => {
            let anti = kink_branch(p, family)?;
            make_ckink(
                p.real("K")?,
                p.real("L")?,
                p.sign("tau")?,
                p.sign_or("profile", 1.0)?,
                p.sign_or("a_sign", 1.0)?,
                anti,
            )
        }
    }
}
