//! Small dense linear algebra on metric matrices.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::tensor::{Tensor, TensorValue, Valence};

/// Rejection bound on `max|g⁻¹| · max|g|`.
pub const DEGENERACY_BOUND: f64 = 1e12;

fn to_matrix(d: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(d, d, data)
}

fn max_abs(data: &[f64]) -> f64 {
    data.iter().fold(0.0, |m, x| f64::max(m, libm::fabs(*x)))
}

/// Inverse of a plain `d×d` matrix given row-major, with the degeneracy check.
pub fn invert(d: usize, data: &[f64]) -> Result<Vec<f64>> {
    if data.len() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, got: data.len() });
    }
    let m = to_matrix(d, data);
    let inv = m.clone().lu().try_inverse().ok_or(Error::DegenerateMetric(f64::INFINITY))?;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            out.push(inv[(i, j)]);
        }
    }
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateMetric(f64::INFINITY));
    }
    let proxy = max_abs(&out) * max_abs(data);
    if proxy > DEGENERACY_BOUND {
        return Err(Error::DegenerateMetric(proxy));
    }
    Ok(out)
}

/// `g^{μν}` from a symmetric nondegenerate `g_{μν}`.
pub fn metric_inverse(g: &TensorValue) -> Result<TensorValue> {
    if g.valence() != Valence::new(0, 2) {
        return Err(Error::Unsupported("metric_inverse expects a (0,2) tensor".into()));
    }
    let d = g.dim();
    let inv = invert(d, g.data())?;
    Tensor::from_data(Valence::new(2, 0), d, inv)
}

/// Inverse of a matrix of jets: plain inverse for the value, then Newton
/// steps `X ← X(2 − gX)`, each of which doubles the number of correct orders.
pub fn invert_jets(d: usize, g: &[Jet]) -> Result<Vec<Jet>> {
    let order = g[0].order();
    let dim = g[0].dim();
    let values: Vec<f64> = g.iter().map(|j| j.value()).collect();
    let inv0 = invert(d, &values)?;
    let mut x: Vec<Jet> = inv0.iter().map(|&v| Jet::constant(dim, order, v)).collect();
    let mut correct = 0;
    while correct < order {
        // gx = g · x
        let mut gx = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Jet::zero(dim, order);
                for k in 0..d {
                    acc.add_mul(&g[i * d + k], &x[k * d + j]);
                }
                gx.push(acc);
            }
        }
        // r = 2·1 − gx
        for (i, r) in gx.iter_mut().enumerate() {
            *r = r.scale(-1.0);
            if i / d == i % d {
                r.data_mut()[0] += 2.0;
            }
        }
        let mut next = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Jet::zero(dim, order);
                for k in 0..d {
                    acc.add_mul(&x[i * d + k], &gx[k * d + j]);
                }
                next.push(acc);
            }
        }
        x = next;
        correct = 2 * correct + 1;
    }
    Ok(x)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(d: usize, data: &[f64]) -> Vec<f64> {
    let m = to_matrix(d, data);
    let sym = (&m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    ev
}

/// Number of negative eigenvalues (the signature index) of a symmetric matrix.
pub fn signature_index(d: usize, data: &[f64]) -> usize {
    symmetric_eigenvalues(d, data).iter().filter(|&&e| e < 0.0).count()
}

/// Numerical rank: singular values at most `rel_tol · σ_max` count as zero.
pub fn numerical_rank(d: usize, data: &[f64], rel_tol: f64) -> usize {
    let m = to_matrix(d, data);
    let sv = m.singular_values();
    let smax = sv.iter().fold(0.0, |a: f64, &b| a.max(b));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

pub fn determinant(d: usize, data: &[f64]) -> f64 {
    to_matrix(d, data).determinant()
}
