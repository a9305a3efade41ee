//! Solution families of the conformal-flatness equations.
//!
//! Each constructor returns a [`SolutionInstance`]: metric, gauge potential,
//! sampling domain and the constants the family asserts. Constructors are
//! built for a positive extra-coordinate signature; the negative branch of a
//! family is the overall-negated metric with the same potential.

mod block;
mod families;
pub(crate) mod forms;
mod manifest;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{ComponentFn, SmoothField};
use crate::tensor::ChartPoint;

pub use block::{assemble_block_metric, BlockMetric, BlockParts, CanonicalStructure};
pub use families::{
    ckink_gap_boundary, make_ckink, make_cpx_space_form, make_kink, make_kink_warped, make_kink_x_line,
    make_kk_nullity_one, make_product_solution, make_real_space_form, Kink2d,
};
pub use manifest::{manifest, ManifestEntry, ParamKind, ParamSpec};

/// Catalog family identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    RealSpaceForm,
    CpxSpaceForm,
    Product,
    Kink2,
    KinkWarped,
    KkNullityOne,
    CKink3,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::RealSpaceForm,
        Family::CpxSpaceForm,
        Family::Product,
        Family::Kink2,
        Family::KinkWarped,
        Family::KkNullityOne,
        Family::CKink3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::RealSpaceForm => "real_space_form",
            Family::CpxSpaceForm => "cpx_space_form",
            Family::Product => "product",
            Family::Kink2 => "kink2",
            Family::KinkWarped => "kink_warped",
            Family::KkNullityOne => "kk_nullity_one",
            Family::CKink3 => "ckink3",
        }
    }

    pub fn from_id(id: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.id() == id)
    }

    /// Whether the family has maximal-rank (complex/para-complex) structure
    /// on the whole chart.
    pub fn is_maximal_rank(self) -> bool {
        matches!(self, Family::CpxSpaceForm)
    }
}

impl core::fmt::Display for Family {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.id())
    }
}

/// Named numeric parameters. Integers and signs are stored as reals and
/// validated on read.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.0.insert(name.into(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn real(&self, name: &str) -> Result<f64> {
        let v = self.get(name).ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{name}`")))?;
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("parameter `{name}` must be finite")));
        }
        Ok(v)
    }

    pub fn real_or(&self, name: &str, default: f64) -> Result<f64> {
        match self.get(name) {
            None => Ok(default),
            Some(_) => self.real(name),
        }
    }

    pub fn integer(&self, name: &str) -> Result<usize> {
        let v = self.real(name)?;
        if v < 0.0 || libm::fmod(v, 1.0) != 0.0 {
            return Err(Error::InvalidParameter(format!("parameter `{name}` must be a non-negative integer, got {v}")));
        }
        Ok(v as usize)
    }

    pub fn integer_or(&self, name: &str, default: usize) -> Result<usize> {
        match self.get(name) {
            None => Ok(default),
            Some(_) => self.integer(name),
        }
    }

    pub fn sign(&self, name: &str) -> Result<f64> {
        let v = self.real(name)?;
        if v != 1.0 && v != -1.0 {
            return Err(Error::InvalidParameter(format!("parameter `{name}` must be +1 or -1, got {v}")));
        }
        Ok(v)
    }

    pub fn sign_or(&self, name: &str, default: f64) -> Result<f64> {
        match self.get(name) {
            None => Ok(default),
            Some(_) => self.sign(name),
        }
    }

    /// Reject names outside `allowed`.
    pub fn check_names(&self, family: Family, allowed: &[&str]) -> Result<()> {
        for (k, _) in self.iter() {
            if !allowed.contains(&k) {
                return Err(Error::InvalidParameter(format!(
                    "unknown parameter `{k}` for {family}; expected one of {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }
}

impl core::fmt::Display for Params {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut first = true;
        for (k, v) in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

pub type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Sampling box plus a validity predicate excluding coordinate singularities.
#[derive(Clone)]
pub struct Domain {
    lo: Vec<f64>,
    hi: Vec<f64>,
    predicate: Predicate,
    margin: f64,
}

impl core::fmt::Debug for Domain {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Domain")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("margin", &self.margin)
            .finish_non_exhaustive()
    }
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, margin: f64, predicate: Predicate) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) || !(margin > 0.0) {
            return Err(Error::InvalidParameter("domain box must be non-empty with positive margin".into()));
        }
        Ok(Self { lo, hi, predicate, margin })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lo
    }

    pub fn upper(&self) -> &[f64] {
        &self.hi
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// The predicate alone, ignoring the sampling box.
    pub fn admits(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && (self.predicate)(x)
    }

    pub fn contains(&self, p: &ChartPoint) -> bool {
        let x = p.coords();
        x.len() == self.dim()
            && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v <= *b)
            && (self.predicate)(x)
    }
}

/// Constants a family asserts, for the metric normalized to a positive
/// extra-coordinate signature (`eps_d · g`).
#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    pub k: f64,
    /// `F²`, when constant.
    pub f2: Option<f64>,
    pub rank: usize,
    pub nullity: usize,
    /// Number of negative eigenvalues of `g` as constructed.
    pub signature_index: usize,
    pub eps_d: f64,
    /// `l²` of the nullity-one families.
    pub l2: Option<f64>,
}

/// A (para-)Kähler factor: a space form of constant (para-)holomorphic
/// curvature on the first `dim` coordinates with its potential.
#[derive(Clone, Debug)]
pub struct KahlerFactor {
    pub g: SmoothField,
    pub potential: SmoothField,
    pub sigma: f64,
    /// Holomorphic curvature `H`, signed for `g` as stored; the Riemann
    /// tensor is `H/4` times the canonical combination.
    pub holomorphic: f64,
}

/// The two-dimensional kink data of kink-based families.
#[derive(Clone)]
pub struct KinkData {
    pub g2: SmoothField,
    /// `φ`, one component over the two external coordinates.
    pub phi: Arc<dyn ComponentFn>,
    /// Constants of the kink system for `g2` as stored.
    pub k: f64,
    pub sigma: f64,
    pub centrifugal: Option<Centrifugal>,
}

impl core::fmt::Debug for KinkData {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("KinkData")
            .field("k", &self.k)
            .field("sigma", &self.sigma)
            .field("centrifugal", &self.centrifugal)
            .finish_non_exhaustive()
    }
}

/// Deformation data of the c-kink.
#[derive(Clone)]
pub struct Centrifugal {
    pub tau: f64,
    pub l2: f64,
    pub big_k: f64,
    pub big_l: f64,
    /// Warp `λ` over the two external coordinates.
    pub lambda: Arc<dyn ComponentFn>,
}

impl core::fmt::Debug for Centrifugal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Centrifugal")
            .field("tau", &self.tau)
            .field("l2", &self.l2)
            .field("K", &self.big_k)
            .field("L", &self.big_l)
            .finish_non_exhaustive()
    }
}

/// One member of a family.
#[derive(Clone, Debug)]
pub struct SolutionInstance {
    pub family: Family,
    pub params: Params,
    pub g: SmoothField,
    pub a: SmoothField,
    pub domain: Domain,
    pub expected: Expected,
    pub block: Option<BlockMetric>,
    pub kahler: Option<KahlerFactor>,
    pub kink: Option<KinkData>,
}

impl SolutionInstance {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn label(&self) -> String {
        format!("{}[{}]", self.family, self.params)
    }

    pub fn eps_d(&self) -> f64 {
        self.expected.eps_d
    }

    /// `eps_d · g`, the metric all identity checks are written for.
    pub fn normalized_metric(&self) -> SmoothField {
        if self.expected.eps_d > 0.0 {
            self.g.clone()
        } else {
            self.g.scaled(-1.0)
        }
    }

    /// The same geometry with the metric replaced by its opposite and the
    /// extra-coordinate signature flipped.
    pub fn opposite(&self) -> Self {
        let d = self.dim();
        let mut out = self.clone();
        out.g = self.g.scaled(-1.0);
        out.expected.eps_d = -self.expected.eps_d;
        out.expected.signature_index = d - self.expected.signature_index;
        out.block = self.block.as_ref().map(families::negate_block);
        out.kahler = self.kahler.as_ref().map(|kf| KahlerFactor {
            g: kf.g.scaled(-1.0),
            potential: kf.potential.clone(),
            sigma: kf.sigma,
            holomorphic: -kf.holomorphic,
        });
        out.kink = self.kink.as_ref().map(|kd| KinkData {
            g2: kd.g2.scaled(-1.0),
            phi: kd.phi.clone(),
            k: -kd.k,
            sigma: -kd.sigma,
            centrifugal: kd.centrifugal.as_ref().map(|c| Centrifugal {
                tau: -c.tau,
                l2: c.l2,
                big_k: c.big_k,
                big_l: c.big_l,
                lambda: Arc::new(crate::field::ScaledFn::new(c.lambda.clone(), -1.0)),
            }),
        });
        out
    }
}

/// Build a family member from named parameters. `eps_d = -1` selects the
/// opposite-metric branch; for the kink families it is equivalent to `anti=1`.
pub fn build(family: Family, params: &Params) -> Result<SolutionInstance> {
    families::build(family, params)
}

/// Three parameter tuples per family spanning small to large curvature.
pub fn default_grid() -> Vec<(Family, Params)> {
    let p = Params::new;
    let mut v = Vec::new();
    let mut push = |f: Family, ps: Params| v.push((f, ps));
    push(Family::RealSpaceForm, p().with("d", 3.0).with("s", 0.0).with("k", 0.1));
    push(Family::RealSpaceForm, p().with("d", 4.0).with("s", 1.0).with("k", -1.0));
    push(Family::RealSpaceForm, p().with("d", 6.0).with("s", 2.0).with("k", 10.0));
    push(Family::CpxSpaceForm, p().with("rp", 2.0).with("s", 0.0).with("F2", 8.0));
    push(Family::CpxSpaceForm, p().with("rp", 2.0).with("s", 0.0).with("F2", -0.8));
    push(Family::CpxSpaceForm, p().with("rp", 3.0).with("s", 1.0).with("F2", 30.0));
    push(Family::Product, p().with("rp", 1.0).with("s", 0.0).with("F2", 4.0).with("n", 2.0).with("s_int", 0.0));
    push(Family::Product, p().with("rp", 1.0).with("s", 0.0).with("F2", -0.4).with("n", 2.0).with("s_int", 1.0));
    push(Family::Product, p().with("rp", 2.0).with("s", 1.0).with("F2", 40.0).with("n", 2.0).with("s_int", 1.0));
    push(Family::Kink2, p().with("k", 0.5).with("warp", 1.0));
    push(Family::Kink2, p().with("k", 2.0).with("warp", -1.0).with("anti", 1.0));
    push(Family::Kink2, p().with("k", 8.0).with("warp", 1.0).with("profile", -1.0));
    push(Family::KinkWarped, p().with("k", 1.0).with("n", 2.0).with("s_int", 0.0).with("warp", 1.0));
    push(Family::KinkWarped, p().with("k", 0.1).with("n", 2.0).with("s_int", 1.0).with("warp", -1.0).with("anti", 1.0));
    push(Family::KinkWarped, p().with("k", 3.0).with("n", 3.0).with("s_int", 1.0).with("warp", -1.0));
    push(Family::KkNullityOne, p().with("rp", 1.0).with("s", 0.0).with("F2", 4.0).with("l", 1.0).with("lambda", 1.0));
    push(Family::KkNullityOne, p().with("rp", 1.0).with("s", 0.0).with("F2", -0.4).with("l", 0.2).with("lambda", 1.0));
    push(Family::KkNullityOne, p().with("rp", 2.0).with("s", 1.0).with("F2", 20.0).with("l", 3.0).with("lambda", -1.0));
    push(Family::CKink3, p().with("K", 2.0).with("L", 0.5).with("tau", 1.0));
    push(Family::CKink3, p().with("K", 2.0).with("L", -0.5).with("tau", -1.0));
    push(Family::CKink3, p().with("K", 5.0).with("L", 1.0).with("tau", 1.0));
    v
}
