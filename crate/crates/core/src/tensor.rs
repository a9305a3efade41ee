//! Points, dense multi-index tensors and index algebra.
//!
//! Slot convention: covariant slots come first, then contravariant slots, each
//! group in the textual order of the symbol. `R_{μνκ}^λ` is stored with flat
//! index `((μ·d + ν)·d + κ)·d + λ`; a covariant derivative prepends its slot,
//! so `D_κ F_{μν}` is stored as `[κ][μ][ν]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Scalar entries a [`Tensor`] can hold: plain values or jets.
pub trait Component: Clone {
    fn zero_like(&self) -> Self;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
    /// `self += c * a`
    fn add_scaled(&mut self, c: f64, a: &Self);
    /// Magnitude of the value part.
    fn magnitude(&self) -> f64;
}

impl Component for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn add_scaled(&mut self, c: f64, a: &Self) {
        *self += c * a;
    }
    fn magnitude(&self) -> f64 {
        libm::fabs(*self)
    }
}

/// A coordinate tuple `x^μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: coords.len() });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Copy with one coordinate shifted, used by finite-difference oracles.
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut coords = self.coords.clone();
        coords[axis] += h;
        Self { coords }
    }

    /// Append a coordinate (the Kaluza-Klein direction).
    pub fn extended(&self, last: f64) -> Self {
        let mut coords = self.coords.clone();
        coords.push(last);
        Self { coords }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Valence {
    pub cov: usize,
    pub contra: usize,
}

impl Valence {
    pub const fn new(cov: usize, contra: usize) -> Self {
        Self { cov, contra }
    }

    pub const fn rank(&self) -> usize {
        self.cov + self.contra
    }
}

/// Dense tensor with `d^(p+q)` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    valence: Valence,
    dim: usize,
    data: Vec<T>,
}

pub type TensorValue = Tensor<f64>;

impl<T: Clone> Tensor<T> {
    pub fn from_data(valence: Valence, dim: usize, data: Vec<T>) -> Result<Self> {
        let n = dim.pow(valence.rank() as u32);
        if data.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: data.len() });
        }
        Ok(Self { valence, dim, data })
    }

    pub fn filled(valence: Valence, dim: usize, value: T) -> Self {
        let n = dim.pow(valence.rank() as u32);
        Self { valence, dim, data: vec![value; n] }
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.valence.rank()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        &self.data[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: T) {
        let f = self.flat_index(idx);
        self.data[f] = v;
    }

    /// Multi-index of a flat position.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let r = self.rank();
        let mut idx = vec![0; r];
        for s in (0..r).rev() {
            idx[s] = flat % self.dim;
            flat /= self.dim;
        }
        idx
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Tensor<U> {
        Tensor { valence: self.valence, dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    fn is_covariant_slot(&self, s: usize) -> bool {
        s < self.valence.cov
    }
}

impl<T: Component> Tensor<T> {
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, x.magnitude()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let data = self
            .data
            .iter()
            .map(|x| {
                let mut z = x.zero_like();
                z.add_scaled(c, x);
                z
            })
            .collect();
        Self { valence: self.valence, dim: self.dim, data }
    }

    /// `self + c · other`, componentwise.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        if self.valence != other.valence || self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.data.len(), got: other.data.len() });
        }
        let mut out = self.clone();
        for (o, x) in out.data.iter_mut().zip(other.data.iter()) {
            o.add_scaled(c, x);
        }
        Ok(out)
    }
}

impl TensorValue {
    pub fn zeros(valence: Valence, dim: usize) -> Self {
        Self::filled(valence, dim, 0.0)
    }

    pub fn identity(dim: usize) -> Self {
        let mut t = Self::zeros(Valence::new(1, 1), dim);
        for i in 0..dim {
            t.set(&[i, i], 1.0);
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.max_magnitude()
    }
}

/// Contract slots `a` and `b`.
///
/// One covariant and one contravariant slot trace directly. Two covariant
/// slots need the inverse metric, two contravariant slots the metric; pass it
/// as `metric` with valence (0,2) or (2,0) respectively.
pub fn contract<T: Component>(t: &Tensor<T>, a: usize, b: usize, metric: Option<&TensorValue>) -> Result<Tensor<T>> {
    let r = t.rank();
    if a >= r || b >= r {
        return Err(Error::SlotOutOfRange { slot: a.max(b), rank: r });
    }
    if a == b {
        return Err(Error::VarianceMismatch { a, b });
    }
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let mixed = t.is_covariant_slot(a) != t.is_covariant_slot(b);
    let d = t.dim;
    let weights: Option<&TensorValue> = if mixed {
        None
    } else {
        match metric {
            Some(m) if m.rank() == 2 && m.dim() == d => Some(m),
            _ => return Err(Error::VarianceMismatch { a, b }),
        }
    };
    let mut cov = t.valence.cov;
    let mut contra = t.valence.contra;
    for s in [a, b] {
        if t.is_covariant_slot(s) {
            cov -= 1;
        } else {
            contra -= 1;
        }
    }
    let out_val = Valence::new(cov, contra);
    let zero = t.data[0].zero_like();
    let mut out = Tensor::filled(out_val, d, zero);
    let mut full = vec![0usize; r];
    for flat in 0..out.data.len() {
        let rest = out.unflatten(flat);
        let mut k = 0;
        for (s, slot) in full.iter_mut().enumerate() {
            if s != a && s != b {
                *slot = rest[k];
                k += 1;
            }
        }
        let acc = &mut out.data[flat];
        for i in 0..d {
            full[a] = i;
            match weights {
                None => {
                    full[b] = i;
                    acc.add_scaled(1.0, &t.data[t.flat_index(&full)]);
                }
                Some(w) => {
                    for j in 0..d {
                        let wij = w.data[i * d + j];
                        if wij != 0.0 {
                            full[b] = j;
                            acc.add_scaled(wij, &t.data[t.flat_index(&full)]);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(t_{…a…b…} − t_{…b…a…})/2`.
pub fn antisym_pair<T: Component>(t: &Tensor<T>, a: usize, b: usize) -> Result<Tensor<T>> {
    let r = t.rank();
    if a >= r || b >= r {
        return Err(Error::SlotOutOfRange { slot: a.max(b), rank: r });
    }
    if t.is_covariant_slot(a) != t.is_covariant_slot(b) {
        return Err(Error::VarianceMismatch { a, b });
    }
    let mut out = t.clone();
    if a == b {
        for x in out.data.iter_mut() {
            *x = x.zero_like();
        }
        return Ok(out);
    }
    for flat in 0..t.data.len() {
        let mut idx = t.unflatten(flat);
        idx.swap(a, b);
        let swapped = t.flat_index(&idx);
        let mut v = t.data[flat].zero_like();
        v.add_scaled(0.5, &t.data[flat]);
        v.add_scaled(-0.5, &t.data[swapped]);
        out.data[flat] = v;
    }
    Ok(out)
}

/// Diagonal pseudo-Euclidean metric with `s` negative entries leading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureMatrix {
    diag: Vec<i8>,
}

impl SignatureMatrix {
    pub fn new(dim: usize, s: usize) -> Result<Self> {
        if s > dim {
            return Err(Error::InvalidParameter(alloc::format!("signature index s={s} must lie in 0..={dim}")));
        }
        let diag = (0..dim).map(|i| if i < s { -1 } else { 1 }).collect();
        Ok(Self { diag })
    }

    pub fn from_diag(diag: Vec<i8>) -> Result<Self> {
        if diag.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidParameter("signature entries must be ±1".into()));
        }
        Ok(Self { diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[i8] {
        &self.diag
    }

    pub fn index(&self) -> usize {
        self.diag.iter().filter(|&&e| e < 0).count()
    }

    pub fn det(&self) -> i8 {
        if self.index().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn entry(&self, i: usize) -> f64 {
        f64::from(self.diag[i])
    }

    pub fn to_tensor(&self) -> TensorValue {
        let d = self.dim();
        let mut t = TensorValue::zeros(Valence::new(0, 2), d);
        for i in 0..d {
            t.set(&[i, i], self.entry(i));
        }
        t
    }
}
