//! Smooth component fields and the differentiation engine.
//!
//! Closed forms implement [`ClosedForm`] once, generically over [`Scalar`].
//! The blanket [`ComponentFn`] impl monomorphises them for `f64` and the three
//! nested dual levels so they can live behind `Arc<dyn ComponentFn>`.
//! [`jet_eval`] sweeps sorted direction tuples: one `D1` evaluation per axis,
//! one `D2` per unordered pair, one `D3` per unordered triple.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::scalar::{seed1, seed2, seed3, Real, Scalar, D1, D2, D3};
use crate::tensor::{ChartPoint, Tensor, TensorValue, Valence};

/// A closed-form map from `dim` coordinates to `len` components.
#[allow(clippy::len_without_is_empty)]
pub trait ClosedForm: Send + Sync {
    fn dim(&self) -> usize;
    fn len(&self) -> usize;
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]);
}

/// Object-safe face of a [`ClosedForm`].
#[allow(clippy::len_without_is_empty)]
pub trait ComponentFn: Send + Sync {
    fn dim(&self) -> usize;
    fn len(&self) -> usize;
    fn eval_f64(&self, x: &[f64], out: &mut [f64]);
    fn eval_d1(&self, x: &[D1], out: &mut [D1]);
    fn eval_d2(&self, x: &[D2], out: &mut [D2]);
    fn eval_d3(&self, x: &[D3], out: &mut [D3]);
}

impl<C: ClosedForm> ComponentFn for C {
    fn dim(&self) -> usize {
        ClosedForm::dim(self)
    }
    fn len(&self) -> usize {
        ClosedForm::len(self)
    }
    fn eval_f64(&self, x: &[f64], out: &mut [f64]) {
        self.eval(x, out)
    }
    fn eval_d1(&self, x: &[D1], out: &mut [D1]) {
        self.eval(x, out)
    }
    fn eval_d2(&self, x: &[D2], out: &mut [D2]) {
        self.eval(x, out)
    }
    fn eval_d3(&self, x: &[D3], out: &mut [D3]) {
        self.eval(x, out)
    }
}

/// Evaluate a type-erased function at any scalar level, allocating the output.
pub fn eval_dyn<S: Scalar>(f: &dyn ComponentFn, x: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); f.len()];
    S::eval_field(f, x, &mut out);
    out
}

/// A tensor field of fixed valence over a `dim`-dimensional chart.
#[derive(Clone)]
pub struct SmoothField {
    valence: Valence,
    dim: usize,
    inner: Arc<dyn ComponentFn>,
}

impl core::fmt::Debug for SmoothField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SmoothField").field("valence", &self.valence).field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl SmoothField {
    pub fn new(valence: Valence, inner: Arc<dyn ComponentFn>) -> Result<Self> {
        let dim = inner.dim();
        let n = dim.pow(valence.rank() as u32);
        if inner.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: inner.len() });
        }
        Ok(Self { valence, dim, inner })
    }

    pub fn from_form<C: ClosedForm + 'static>(valence: Valence, form: C) -> Result<Self> {
        Self::new(valence, Arc::new(form))
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.len() == 0
    }

    pub fn component_fn(&self) -> &Arc<dyn ComponentFn> {
        &self.inner
    }

    /// Plain value at `p`.
    pub fn value(&self, p: &ChartPoint) -> Result<TensorValue> {
        self.check_point(p)?;
        let mut out = vec![0.0; self.len()];
        self.inner.eval_f64(p.coords(), &mut out);
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Tensor::from_data(self.valence, self.dim, out)
    }

    fn check_point(&self, p: &ChartPoint) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.dim() });
        }
        Ok(())
    }

    /// `c · self`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { valence: self.valence, dim: self.dim, inner: Arc::new(ScaledFn::new(self.inner.clone(), c)) }
    }
}

/// `c · f` for a type-erased component function.
pub struct ScaledFn {
    base: Arc<dyn ComponentFn>,
    c: f64,
}

impl ScaledFn {
    pub fn new(base: Arc<dyn ComponentFn>, c: f64) -> Self {
        Self { base, c }
    }
}

impl ClosedForm for ScaledFn {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn len(&self) -> usize {
        self.base.len()
    }
    fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
        S::eval_field(&*self.base, x, out);
        for o in out.iter_mut() {
            *o = o.scale(self.c);
        }
    }
}

/// Value and partial derivatives of every component at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldJet {
    dim: usize,
    order: usize,
    comps: Vec<Jet>,
}

impl FieldJet {
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
    pub fn component(&self, c: usize) -> &Jet {
        &self.comps[c]
    }
    pub fn value(&self, c: usize) -> f64 {
        self.comps[c].value()
    }
    pub fn first(&self, i: usize, c: usize) -> f64 {
        self.comps[c].first(i)
    }
    pub fn second(&self, i: usize, j: usize, c: usize) -> f64 {
        self.comps[c].second(i, j)
    }
    pub fn third(&self, i: usize, j: usize, k: usize, c: usize) -> f64 {
        self.comps[c].third(i, j, k)
    }
    pub fn into_jets(self) -> Vec<Jet> {
        self.comps
    }
}

/// Jets of a tensor field as a tensor of [`Jet`] entries.
pub fn jet_tensor(field: &SmoothField, p: &ChartPoint, order: usize) -> Result<Tensor<Jet>> {
    let fj = jet_eval(field, p, order)?;
    Tensor::from_data(field.valence(), field.dim(), fj.into_jets())
}

/// Value and all partial derivatives up to `order` (≤ 3) of a field.
pub fn jet_eval(field: &SmoothField, p: &ChartPoint, order: usize) -> Result<FieldJet> {
    field.check_point(p)?;
    jet_eval_fn(&*field.inner, p.coords(), order)
}

/// [`jet_eval`] for a bare component function.
pub fn jet_eval_fn(f: &dyn ComponentFn, x: &[f64], order: usize) -> Result<FieldJet> {
    if order > Jet::MAX_ORDER {
        return Err(Error::OrderTooHigh(order));
    }
    let d = f.dim();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.len() });
    }
    let n = f.len();
    let width = {
        let mut w = 1;
        let mut p = 1;
        for _ in 0..order {
            p *= d;
            w += p;
        }
        w
    };
    let mut raw = vec![0.0; n * width];
    let at = |c: usize, off: usize| c * width + off;

    let mut v = vec![0.0; n];
    f.eval_f64(x, &mut v);
    for c in 0..n {
        raw[at(c, 0)] = v[c];
    }

    if order >= 1 {
        let mut out = vec![D1::zero(); n];
        for a in 0..d {
            let xs: Vec<D1> = (0..d).map(|i| seed1(x[i], i == a)).collect();
            f.eval_d1(&xs, &mut out);
            for c in 0..n {
                raw[at(c, 1 + a)] = out[c].eps;
            }
        }
    }
    if order >= 2 {
        let base = 1 + d;
        let mut out = vec![D2::zero(); n];
        for a in 0..d {
            for b in a..d {
                let xs: Vec<D2> = (0..d).map(|i| seed2(x[i], i == a, i == b)).collect();
                f.eval_d2(&xs, &mut out);
                for c in 0..n {
                    let v = out[c].eps.eps;
                    raw[at(c, base + a * d + b)] = v;
                    raw[at(c, base + b * d + a)] = v;
                }
            }
        }
    }
    if order >= 3 {
        let base = 1 + d + d * d;
        let mut out = vec![D3::zero(); n];
        for a in 0..d {
            for b in a..d {
                for e in b..d {
                    let xs: Vec<D3> = (0..d).map(|i| seed3(x[i], i == a, i == b, i == e)).collect();
                    f.eval_d3(&xs, &mut out);
                    for c in 0..n {
                        let v = out[c].eps.eps.eps;
                        for (i, j, k) in [(a, b, e), (a, e, b), (b, a, e), (b, e, a), (e, a, b), (e, b, a)] {
                            raw[at(c, base + (i * d + j) * d + k)] = v;
                        }
                    }
                }
            }
        }
    }
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let comps = raw.chunks(width).map(|ch| Jet::from_parts(d, order, ch.to_vec())).collect();
    Ok(FieldJet { dim: d, order, comps })
}

/// One mixed partial `∂_{dirs[0]} … ∂_{dirs[k-1]}` of every component, with
/// the directions seeded in the given order (outermost first).
///
/// Different orderings of the same directions take different arithmetic
/// paths, which is what the mixed-partial symmetry checks compare.
pub fn ordered_partial(f: &dyn ComponentFn, x: &[f64], dirs: &[usize]) -> Result<Vec<f64>> {
    let d = f.dim();
    let n = f.len();
    let out = match *dirs {
        [] => {
            let mut out = vec![0.0; n];
            f.eval_f64(x, &mut out);
            out
        }
        [a] => {
            let xs: Vec<D1> = (0..d).map(|i| seed1(x[i], i == a)).collect();
            eval_dyn(f, &xs).iter().map(|y| y.eps).collect()
        }
        [a, b] => {
            let xs: Vec<D2> = (0..d).map(|i| seed2(x[i], i == a, i == b)).collect();
            eval_dyn(f, &xs).iter().map(|y| y.eps.eps).collect()
        }
        [a, b, c] => {
            let xs: Vec<D3> = (0..d).map(|i| seed3(x[i], i == a, i == b, i == c)).collect();
            eval_dyn(f, &xs).iter().map(|y| y.eps.eps.eps).collect()
        }
        _ => return Err(Error::OrderTooHigh(dirs.len())),
    };
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Const;
    impl ClosedForm for Const {
        fn dim(&self) -> usize {
            2
        }
        fn len(&self) -> usize {
            4
        }
        fn eval<S: Scalar>(&self, _x: &[S], out: &mut [S]) {
            for (i, o) in out.iter_mut().enumerate() {
                *o = S::cst(i as f64 + 0.5);
            }
        }
    }

    /// (x¹)² on a 2-d chart.
    struct Square;
    impl ClosedForm for Square {
        fn dim(&self) -> usize {
            2
        }
        fn len(&self) -> usize {
            1
        }
        fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
            out[0] = x[1] * x[1];
        }
    }

    struct Mixed;
    impl ClosedForm for Mixed {
        fn dim(&self) -> usize {
            3
        }
        fn len(&self) -> usize {
            2
        }
        fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
            out[0] = (x[0] * x[1]).sin() * x[2].exp();
            out[1] = (x[0] + x[2].square()).tanh() / (S::one() + x[1].square());
        }
    }

    #[test]
    fn constant_field_has_zero_partials() {
        let f = SmoothField::from_form(Valence::new(0, 2), Const).unwrap();
        let p = ChartPoint::new(vec![0.3, -1.2]).unwrap();
        let j = jet_eval(&f, &p, 2).unwrap();
        for c in 0..4 {
            assert_eq!(j.value(c), c as f64 + 0.5);
            for a in 0..2 {
                assert_eq!(j.first(a, c), 0.0);
                for b in 0..2 {
                    assert_eq!(j.second(a, b, c), 0.0);
                }
            }
        }
    }

    #[test]
    fn polynomial_jet() {
        let f = SmoothField::from_form(Valence::new(0, 0), Square).unwrap();
        let p = ChartPoint::new(vec![0.0, 3.0]).unwrap();
        let j = jet_eval(&f, &p, 2).unwrap();
        assert_eq!(j.value(0), 9.0);
        assert_eq!(j.first(1, 0), 6.0);
        assert_eq!(j.second(1, 1, 0), 2.0);
        assert_eq!(j.first(0, 0), 0.0);
    }

    #[test]
    fn order_above_three_is_rejected() {
        let f = SmoothField::from_form(Valence::new(0, 0), Square).unwrap();
        let p = ChartPoint::new(vec![0.0, 3.0]).unwrap();
        assert_eq!(jet_eval(&f, &p, 4).unwrap_err(), Error::OrderTooHigh(4));
    }

    #[test]
    fn value_part_is_order_independent() {
        let f = SmoothField::from_form(Valence::new(0, 0), Square).unwrap();
        let p = ChartPoint::new(vec![0.1, 0.7]).unwrap();
        let j0 = jet_eval(&f, &p, 0).unwrap();
        let j3 = jet_eval(&f, &p, 3).unwrap();
        assert_eq!(j0.value(0), j3.value(0));
    }

    #[test]
    fn third_partials_are_symmetric_across_orderings() {
        let x = [0.4, -0.3, 0.2];
        for dirs in [[0usize, 1, 2], [0, 0, 2], [1, 2, 2]] {
            let base = ordered_partial(&Mixed, &x, &dirs).unwrap();
            let perms = [[dirs[0], dirs[2], dirs[1]], [dirs[1], dirs[0], dirs[2]], [dirs[2], dirs[1], dirs[0]]];
            for p in perms {
                let other = ordered_partial(&Mixed, &x, &p).unwrap();
                for (a, b) in base.iter().zip(other.iter()) {
                    assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn non_finite_values_are_reported() {
        struct Pole;
        impl ClosedForm for Pole {
            fn dim(&self) -> usize {
                2
            }
            fn len(&self) -> usize {
                1
            }
            fn eval<S: Scalar>(&self, x: &[S], out: &mut [S]) {
                out[0] = x[0].recip();
            }
        }
        let f = SmoothField::from_form(Valence::new(0, 0), Pole).unwrap();
        let p = ChartPoint::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(jet_eval(&f, &p, 1).unwrap_err(), Error::NonFinite);
    }
}
