//! Canonical flat blocks and adapted-frame block metrics.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{ComponentFn, SmoothField};
use crate::tensor::{ChartPoint, Tensor, TensorValue, Valence};

use super::forms::{BlockAssembly, Dyn, OnSlice};

/// Flat metric `η = diag(σ η_d, η_d)` and structure
/// `ε_μ^ν = [[0, η_d], [−σ η_d, 0]]` on `d = 2r'` coordinates.
///
/// `ε² = −σ` and `εᵀ η ε = σ η`, so `ε` is a complex structure with Hermitian
/// `η` for `σ = +1` and a para-complex one with anti-Hermitian `η` for `σ = −1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalStructure {
    half: usize,
    sigma: f64,
    eta: Vec<f64>,
    eps_up: Vec<f64>,
    eps_low: Vec<f64>,
}

impl CanonicalStructure {
    /// `half = r'`, `s` negative entries in `η_d`, `sigma = ±1`.
    pub fn new(half: usize, s: usize, sigma: f64) -> Result<Self> {
        if half == 0 {
            return Err(Error::InvalidParameter("need r' ≥ 1 complex dimensions".into()));
        }
        if s > half {
            return Err(Error::InvalidParameter(alloc::format!("block signature index s'={s} must lie in 0..={half}")));
        }
        if sigma != 1.0 && sigma != -1.0 {
            return Err(Error::InvalidParameter("σ must be +1 or -1".into()));
        }
        let d = 2 * half;
        let eta_d: Vec<f64> = (0..half).map(|i| if i < s { -1.0 } else { 1.0 }).collect();
        let mut eta = vec![0.0; d];
        for i in 0..half {
            eta[i] = sigma * eta_d[i];
            eta[half + i] = eta_d[i];
        }
        let mut eps_up = vec![0.0; d * d];
        for i in 0..half {
            eps_up[i * d + half + i] = eta_d[i];
            eps_up[(half + i) * d + i] = -sigma * eta_d[i];
        }
        let mut eps_low = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                eps_low[i * d + j] = eps_up[i * d + j] * eta[j];
            }
        }
        Ok(Self { half, sigma, eta, eps_up, eps_low })
    }

    pub fn dim(&self) -> usize {
        2 * self.half
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn eta_diag(&self) -> &[f64] {
        &self.eta
    }

    /// Number of negative entries of `η`.
    pub fn signature_index(&self) -> usize {
        self.eta.iter().filter(|&&e| e < 0.0).count()
    }

    /// `ε_μ^ν`
    pub fn eps_up(&self, m: usize, n: usize) -> f64 {
        self.eps_up[m * self.dim() + n]
    }

    /// `ε_{μν} = ε_μ^κ η_{κν}`
    pub fn eps_low(&self, m: usize, n: usize) -> f64 {
        self.eps_low[m * self.dim() + n]
    }

    pub fn eta_tensor(&self) -> TensorValue {
        let d = self.dim();
        let mut t = TensorValue::zeros(Valence::new(0, 2), d);
        for i in 0..d {
            t.set(&[i, i], self.eta[i]);
        }
        t
    }

    /// `ε_μ^ν` as a (1,1) tensor.
    pub fn eps_tensor(&self) -> TensorValue {
        Tensor::from_data(Valence::new(1, 1), self.dim(), self.eps_up.clone()).expect("d²")
    }
}

/// Metric in an adapted frame: `r` external coordinates `ξ`, then `n`
/// internal coordinates `y`.
///
/// Parts are functions of all `r + n` coordinates: external block `g_{αβ}`
/// (`r²` components), warp `λ` (one), internal `c_{ij}` (`n²`), and the
/// optional potential `a_α^i` stored `[α][i]`. The internal metric is
/// `h_{ij} = λ c_{ij}`.
#[derive(Clone)]
pub struct BlockMetric {
    r: usize,
    n: usize,
    ext: Dyn,
    warp: Dyn,
    internal: Dyn,
    a: Option<Dyn>,
    metric: SmoothField,
}

impl core::fmt::Debug for BlockMetric {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BlockMetric")
            .field("r", &self.r)
            .field("n", &self.n)
            .field("has_potential", &self.a.is_some())
            .finish_non_exhaustive()
    }
}

fn expect_shape(f: &dyn ComponentFn, dim: usize, len: usize) -> Result<()> {
    if f.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: f.dim() });
    }
    if f.len() != len {
        return Err(Error::DimensionMismatch { expected: len, got: f.len() });
    }
    Ok(())
}

impl BlockMetric {
    /// Parts given over the full chart.
    pub fn from_full_parts(
        r: usize,
        n: usize,
        ext: Arc<dyn ComponentFn>,
        warp: Arc<dyn ComponentFn>,
        internal: Arc<dyn ComponentFn>,
        a: Option<Arc<dyn ComponentFn>>,
    ) -> Result<Self> {
        if r == 0 || n == 0 {
            return Err(Error::InvalidParameter("both blocks must be non-empty".into()));
        }
        let d = r + n;
        expect_shape(&*ext, d, r * r)?;
        expect_shape(&*warp, d, 1)?;
        expect_shape(&*internal, d, n * n)?;
        if let Some(a) = &a {
            expect_shape(&**a, d, r * n)?;
        }
        let form =
            BlockAssembly { r, n, ext: ext.clone(), warp: warp.clone(), internal: internal.clone(), a: a.clone() };
        let metric = SmoothField::from_form(Valence::new(0, 2), form)?;
        Ok(Self { r, n, ext, warp, internal, a, metric })
    }

    pub fn external_dim(&self) -> usize {
        self.r
    }

    pub fn internal_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.r + self.n
    }

    /// Assembled `g_{μν}`.
    pub fn metric(&self) -> &SmoothField {
        &self.metric
    }

    pub fn external_fn(&self) -> &Arc<dyn ComponentFn> {
        &self.ext
    }

    pub fn warp_fn(&self) -> &Arc<dyn ComponentFn> {
        &self.warp
    }

    pub fn internal_fn(&self) -> &Arc<dyn ComponentFn> {
        &self.internal
    }

    pub fn potential_fn(&self) -> Option<&Arc<dyn ComponentFn>> {
        self.a.as_ref()
    }

    /// Values of the parts at a point.
    pub fn parts_at(&self, p: &ChartPoint) -> Result<BlockParts> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.dim() });
        }
        let x = p.coords();
        let mut ext = vec![0.0; self.r * self.r];
        self.ext.eval_f64(x, &mut ext);
        let mut lam = [0.0];
        self.warp.eval_f64(x, &mut lam);
        let mut c = vec![0.0; self.n * self.n];
        self.internal.eval_f64(x, &mut c);
        let mut a = vec![0.0; self.r * self.n];
        if let Some(af) = &self.a {
            af.eval_f64(x, &mut a);
        }
        Ok(BlockParts { external: ext, warp: lam[0], internal: c, potential: a })
    }
}

/// Block metric parts at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockParts {
    /// `g_{αβ}`, `r × r`.
    pub external: Vec<f64>,
    /// `λ`.
    pub warp: f64,
    /// `c_{ij}`, `n × n`.
    pub internal: Vec<f64>,
    /// `a_α^i` stored `[α][i]`.
    pub potential: Vec<f64>,
}

/// Assemble the adapted-frame metric from parts on their natural charts:
/// `ext`, `warp` and `a` over the `r` external coordinates, `internal` over
/// the `n` internal ones.
pub fn assemble_block_metric(
    ext: Arc<dyn ComponentFn>,
    internal: Arc<dyn ComponentFn>,
    warp: Arc<dyn ComponentFn>,
    a: Option<Arc<dyn ComponentFn>>,
) -> Result<BlockMetric> {
    let r = ext.dim();
    let n = internal.dim();
    expect_shape(&*ext, r, r * r)?;
    expect_shape(&*internal, n, n * n)?;
    expect_shape(&*warp, r, 1)?;
    if let Some(a) = &a {
        expect_shape(&**a, r, r * n)?;
    }
    let d = r + n;
    let lift = |f: Arc<dyn ComponentFn>, start: usize| -> Arc<dyn ComponentFn> {
        Arc::new(OnSlice { inner: f, start, total: d })
    };
    BlockMetric::from_full_parts(r, n, lift(ext, 0), lift(warp, 0), lift(internal, r), a.map(|a| lift(a, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::forms::Constant;

    fn constant(dim: usize, values: Vec<f64>) -> Arc<dyn ComponentFn> {
        Arc::new(Constant { dim, values })
    }

    #[test]
    fn canonical_structure_identities() {
        for (half, s, sigma) in [(1, 0, 1.0), (2, 1, 1.0), (2, 0, -1.0), (3, 2, -1.0)] {
            let cs = CanonicalStructure::new(half, s, sigma).unwrap();
            let d = cs.dim();
            for i in 0..d {
                for j in 0..d {
                    let mut sq = 0.0;
                    let mut herm = 0.0;
                    for k in 0..d {
                        sq += cs.eps_up(i, k) * cs.eps_up(k, j);
                        herm += cs.eps_up(k, i) * cs.eta_diag()[k] * cs.eps_up(k, j);
                    }
                    let id = if i == j { 1.0 } else { 0.0 };
                    assert_eq!(sq, -sigma * id);
                    assert_eq!(herm, sigma * cs.eta_diag()[i] * id);
                }
            }
            let expected_index = if sigma > 0.0 { 2 * s } else { half };
            assert_eq!(cs.signature_index(), expected_index);
        }
    }

    #[test]
    fn zero_potential_gives_direct_sum() {
        let ext = constant(2, vec![-1.0, 0.0, 0.0, 1.0]);
        let int = constant(1, vec![1.0]);
        let warp = constant(2, vec![3.0]);
        let b = assemble_block_metric(ext, int, warp, None).unwrap();
        let g = b.metric().value(&ChartPoint::new(vec![0.1, 0.2, 0.3]).unwrap()).unwrap();
        assert_eq!(g.data(), &[-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0]);
    }

    #[test]
    fn constant_potential_with_unit_internal_metric() {
        let ext = constant(2, vec![2.0, 0.5, 0.5, 1.0]);
        let int = constant(1, vec![1.0]);
        let warp = constant(2, vec![1.0]);
        let a = constant(2, vec![0.25, -2.0]);
        let b = assemble_block_metric(ext, int, warp, Some(a)).unwrap();
        let g = b.metric().value(&ChartPoint::new(vec![0.0, 0.0, 0.0]).unwrap()).unwrap();
        let expected = [2.0 + 0.0625, 0.5 - 0.5, 0.25, 0.5 - 0.5, 1.0 + 4.0, -2.0, 0.25, -2.0, 1.0];
        assert_eq!(g.data(), &expected);
    }

    #[test]
    fn mismatched_parts_are_rejected() {
        let ext = constant(2, vec![1.0, 0.0, 0.0, 1.0]);
        let int = constant(1, vec![1.0]);
        let warp = constant(3, vec![1.0]);
        assert!(matches!(assemble_block_metric(ext, int, warp, None), Err(Error::DimensionMismatch { .. })));
    }
}
