//! Machine-readable listing of the families and their parameters.

use super::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Real,
    Integer,
    Sign,
    Flag,
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub range: &'static str,
    pub default: Option<f64>,
    pub doc: &'static str,
}

#[derive(Clone, Copy, Debug)]
pub struct ManifestEntry {
    pub family: Family,
    pub title: &'static str,
    pub params: &'static [ParamSpec],
    pub rank: &'static str,
    pub nullity: &'static str,
    pub eps_d: &'static str,
    pub citation: &'static str,
}

const fn p(
    name: &'static str,
    kind: ParamKind,
    range: &'static str,
    default: Option<f64>,
    doc: &'static str,
) -> ParamSpec {
    ParamSpec { name, kind, range, default, doc }
}

use ParamKind::*;

const EPS: ParamSpec = p("eps_d", Sign, "±1", Some(1.0), "extra-coordinate signature; -1 negates the metric");

const REAL: &[ParamSpec] = &[
    p("d", Integer, "≥ 2", None, "dimension"),
    p("s", Integer, "0..=d", Some(0.0), "signature index"),
    p("k", Real, "any", None, "sectional curvature"),
    EPS,
];

const CPX: &[ParamSpec] = &[
    p("rp", Integer, "≥ 1", None, "half dimension r', d = 2r'"),
    p("s", Integer, "0..=r'", Some(0.0), "signature index of the η_d block"),
    p("sigma", Sign, "sign(F2)", None, "+1 complex, -1 para-complex"),
    p("F2", Real, "≠ 0", None, "invariant F_{μν}F^{μν}"),
    EPS,
];

const PRODUCT: &[ParamSpec] = &[
    p("rp", Integer, "≥ 1", None, "half dimension of the external block, r = 2r'"),
    p("s", Integer, "0..=r'", Some(0.0), "external block signature index"),
    p("sigma", Sign, "sign(F2)", None, "+1 complex, -1 para-complex"),
    p("F2", Real, "≠ 0", None, "invariant F_{μν}F^{μν}"),
    p("n", Integer, "≥ 2", None, "internal dimension"),
    p("s_int", Integer, "0..=n", Some(0.0), "internal signature index"),
    EPS,
];

const KINK2: &[ParamSpec] = &[
    p("k", Real, "> 0", None, "kink parameter"),
    p("profile", Sign, "±1", Some(1.0), "sign of the profile and potential"),
    p("warp", Sign, "±1", Some(1.0), "sign of the warp ±4k tanh²"),
    p("anti", Flag, "0|1", Some(0.0), "opposite-metric branch"),
    EPS,
];

const KINK_WARPED: &[ParamSpec] = &[
    p("k", Real, "> 0", None, "kink parameter"),
    p("n", Integer, "≥ 2", None, "internal dimension"),
    p("s_int", Integer, "0..=n", Some(0.0), "internal signature index"),
    p("warp", Sign, "±1", Some(1.0), "sign of the warp ±4k tanh²"),
    p("kint_sign", Sign, "paired with warp", None, "optional internal curvature sign, validated"),
    p("profile", Sign, "±1", Some(1.0), "sign of the profile and potential"),
    p("anti", Flag, "0|1", Some(0.0), "opposite-metric branch"),
    EPS,
];

const NULLITY_ONE: &[ParamSpec] = &[
    p("rp", Integer, "≥ 1", None, "half dimension of the external block, r = 2r'"),
    p("s", Integer, "0..=r'", Some(0.0), "external block signature index"),
    p("sigma", Sign, "sign(F2)", None, "+1 complex, -1 para-complex"),
    p("F2", Real, "≠ 0", None, "invariant F_{μν}F^{μν}"),
    p("l", Real, "any", None, "angular-momentum constant"),
    p("lambda", Sign, "±1", Some(1.0), "internal metric h₁₁"),
    p("profile", Sign, "±1", Some(1.0), "sign of the potential"),
    EPS,
];

const CKINK: &[ParamSpec] = &[
    p("K", Real, "> 0", None, "profile constant"),
    p("L", Real, "τL > 0, |L| < 2K if τ = -1", None, "deformation constant"),
    p("tau", Sign, "±1", None, "+1 centripetal, -1 centrifugal"),
    p("profile", Sign, "±1", Some(1.0), "sign of the profile and potential"),
    p("a_sign", Sign, "±1", Some(1.0), "sign of the off-diagonal potential"),
    p("anti", Flag, "0|1", Some(0.0), "opposite-metric branch"),
    EPS,
];

const ENTRIES: [ManifestEntry; 7] = [
    ManifestEntry {
        family: Family::RealSpaceForm,
        title: "real space form ℝ^d_s, S^d_s, H^d_s",
        params: REAL,
        rank: "0",
        nullity: "d",
        eps_d: "±1",
        citation: "Table 1 row r=0, n=d; §4",
    },
    ManifestEntry {
        family: Family::CpxSpaceForm,
        title: "complex / para-complex space form ℂP, 𝔹H",
        params: CPX,
        rank: "d",
        nullity: "0",
        eps_d: "+1 (ℂH, 𝔹P for -1)",
        citation: "Table 1 row r=d, n=0; §4",
    },
    ManifestEntry {
        family: Family::Product,
        title: "(para-)complex space form × real space form",
        params: PRODUCT,
        rank: "r = 2r'",
        nullity: "n",
        eps_d: "±1",
        citation: "Table 1 row r≥2, n>1; §5.1.2",
    },
    ManifestEntry {
        family: Family::Kink2,
        title: "gravitational kink × ℝ",
        params: KINK2,
        rank: "2",
        nullity: "1",
        eps_d: "+1 (anti=0), -1 (anti=1)",
        citation: "Table 1 row r=2, n=1, l=0; §5.1.1, §5.2",
    },
    ManifestEntry {
        family: Family::KinkWarped,
        title: "kink warped with a real space form",
        params: KINK_WARPED,
        rank: "2",
        nullity: "n",
        eps_d: "+1 (anti=0), -1 (anti=1)",
        citation: "Table 1 row r=2, n>1; §5.1.3",
    },
    ManifestEntry {
        family: Family::KkNullityOne,
        title: "Kaluza-Klein product over a (para-)complex space form",
        params: NULLITY_ONE,
        rank: "r = 2r'",
        nullity: "1",
        eps_d: "±1",
        citation: "Table 1 row r≥2, n=1; §5.2.1",
    },
    ManifestEntry {
        family: Family::CKink3,
        title: "centripetal / centrifugal kink deformation",
        params: CKINK,
        rank: "2",
        nullity: "1",
        eps_d: "+1 (anti=0), -1 (anti=1)",
        citation: "Table 1 row r=2, n=1; §5.2.2",
    },
];

pub fn manifest() -> &'static [ManifestEntry] {
    &ENTRIES
}

pub(crate) fn entry(f: Family) -> &'static ManifestEntry {
    ENTRIES.iter().find(|e| e.family == f).expect("every family listed")
}
