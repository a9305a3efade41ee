//! Truncated derivative arrays ("jets") used for tensor algebra after field
//! evaluation.
//!
//! A [`Jet`] of order `m` over `d` coordinates stores a value together with
//! every partial derivative up to order `m` as full (symmetric, redundant)
//! arrays. Products follow the Leibniz rule, unary maps the Faà di Bruno rule,
//! and [`Jet::partial`] shifts the arrays down one order. Mixing jets of
//! different order truncates to the lower one.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::tensor::Component;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    dim: usize,
    order: usize,
    data: Vec<f64>,
}

#[inline]
fn layout_len(dim: usize, order: usize) -> usize {
    let mut n = 1;
    let mut p = 1;
    for _ in 0..order {
        p *= dim;
        n += p;
    }
    n
}

impl Jet {
    pub const MAX_ORDER: usize = 3;

    pub fn constant(dim: usize, order: usize, value: f64) -> Self {
        assert!(order <= Self::MAX_ORDER);
        let mut data = vec![0.0; layout_len(dim, order)];
        data[0] = value;
        Self { dim, order, data }
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        Self::constant(dim, order, 0.0)
    }

    /// The coordinate function `x^i` evaluated at `at`.
    pub fn coordinate(dim: usize, order: usize, i: usize, at: f64) -> Self {
        let mut j = Self::constant(dim, order, at);
        if order >= 1 {
            j.data[1 + i] = 1.0;
        }
        j
    }

    pub(crate) fn from_parts(dim: usize, order: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), layout_len(dim, order));
        Self { dim, order, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.data[0]
    }

    #[inline]
    fn o1(&self) -> usize {
        1
    }
    #[inline]
    fn o2(&self) -> usize {
        1 + self.dim
    }
    #[inline]
    fn o3(&self) -> usize {
        1 + self.dim + self.dim * self.dim
    }

    pub fn first(&self, i: usize) -> f64 {
        assert!(self.order >= 1, "jet order too low for a first partial");
        self.data[self.o1() + i]
    }

    pub fn second(&self, i: usize, j: usize) -> f64 {
        assert!(self.order >= 2, "jet order too low for a second partial");
        self.data[self.o2() + i * self.dim + j]
    }

    pub fn third(&self, i: usize, j: usize, k: usize) -> f64 {
        assert!(self.order >= 3, "jet order too low for a third partial");
        let d = self.dim;
        self.data[self.o3() + (i * d + j) * d + k]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self { dim: self.dim, order, data: self.data[..layout_len(self.dim, order)].to_vec() }
    }

    /// The same jet seen as a function of the first `m` coordinates only,
    /// dropping every partial that involves a later direction.
    pub fn restrict(&self, m: usize) -> Self {
        assert!(m <= self.dim);
        let d = self.dim;
        let mut out = Self::zero(m, self.order);
        out.data[0] = self.data[0];
        if self.order >= 1 {
            out.data[1..1 + m].copy_from_slice(&self.data[1..1 + m]);
        }
        if self.order >= 2 {
            for i in 0..m {
                for j in 0..m {
                    out.data[1 + m + i * m + j] = self.data[self.o2() + i * d + j];
                }
            }
        }
        if self.order >= 3 {
            let o3 = 1 + m + m * m;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        out.data[o3 + (i * m + j) * m + k] = self.data[self.o3() + (i * d + j) * d + k];
                    }
                }
            }
        }
        out
    }

    /// `∂_i` of this jet, one order lower.
    pub fn partial(&self, i: usize) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let d = self.dim;
        let order = self.order - 1;
        let mut out = Self::zero(d, order);
        out.data[0] = self.data[1 + i];
        if order >= 1 {
            let src = self.o2() + i * d;
            out.data[1..1 + d].copy_from_slice(&self.data[src..src + d]);
        }
        if order >= 2 {
            let src = self.o3() + i * d * d;
            out.data[1 + d..1 + d + d * d].copy_from_slice(&self.data[src..src + d * d]);
        }
        out
    }

    /// `φ ∘ self` for a unary map given its value and first three derivatives
    /// at `self.value()`.
    pub fn compose(&self, phi: [f64; 4]) -> Self {
        let d = self.dim;
        let m = self.order;
        let mut out = Self::zero(d, m);
        out.data[0] = phi[0];
        let (p1, p2, p3) = (phi[1], phi[2], phi[3]);
        if m >= 1 {
            for i in 0..d {
                out.data[1 + i] = p1 * self.data[1 + i];
            }
        }
        if m >= 2 {
            let o2 = self.o2();
            for i in 0..d {
                let fi = self.data[1 + i];
                for j in 0..d {
                    let fj = self.data[1 + j];
                    out.data[o2 + i * d + j] = p2 * fi * fj + p1 * self.data[o2 + i * d + j];
                }
            }
        }
        if m >= 3 {
            let (o2, o3) = (self.o2(), self.o3());
            let f1 = |i: usize| self.data[1 + i];
            let f2 = |i: usize, j: usize| self.data[o2 + i * d + j];
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let idx = o3 + (i * d + j) * d + k;
                        out.data[idx] = p3 * f1(i) * f1(j) * f1(k)
                            + p2 * (f2(i, j) * f1(k) + f2(i, k) * f1(j) + f2(j, k) * f1(i))
                            + p1 * self.data[idx];
                    }
                }
            }
        }
        out
    }

    pub fn recip(&self) -> Self {
        let v = self.value();
        let r = 1.0 / v;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sqrt(&self) -> Self {
        let s = libm::sqrt(self.value());
        let v = self.value();
        self.compose([s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)])
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, order: self.order, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Largest magnitude among the stored value and partials.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, libm::fabs(*x)))
    }

    /// `self += a * b`, truncated to the lowest of the three orders.
    pub fn add_mul(&mut self, a: &Jet, b: &Jet) {
        self.add_mul_scaled(1.0, a, b)
    }

    /// `self += c · a · b` without allocating a temporary.
    pub fn add_mul_scaled(&mut self, c: f64, a: &Jet, b: &Jet) {
        let m = self.order.min(a.order).min(b.order);
        if m < self.order {
            *self = self.truncate(m);
        }
        let d = self.dim;
        let (a0, b0) = (a.data[0], b.data[0]);
        self.data[0] += c * a0 * b0;
        if m >= 1 {
            for i in 0..d {
                self.data[1 + i] += c * (a.data[1 + i] * b0 + a0 * b.data[1 + i]);
            }
        }
        if m >= 2 {
            let o2 = 1 + d;
            for i in 0..d {
                let (ai, bi) = (a.data[1 + i], b.data[1 + i]);
                for j in 0..d {
                    let ij = o2 + i * d + j;
                    self.data[ij] += c * (a.data[ij] * b0 + ai * b.data[1 + j] + a.data[1 + j] * bi + a0 * b.data[ij]);
                }
            }
        }
        if m >= 3 {
            let o2 = 1 + d;
            let o3 = 1 + d + d * d;
            for i in 0..d {
                for j in 0..d {
                    let ij = o2 + i * d + j;
                    for k in 0..d {
                        let ik = o2 + i * d + k;
                        let jk = o2 + j * d + k;
                        let ijk = o3 + (i * d + j) * d + k;
                        self.data[ijk] += c
                            * (a.data[ijk] * b0
                                + a.data[ij] * b.data[1 + k]
                                + a.data[ik] * b.data[1 + j]
                                + a.data[jk] * b.data[1 + i]
                                + a.data[1 + i] * b.data[jk]
                                + a.data[1 + j] * b.data[ik]
                                + a.data[1 + k] * b.data[ij]
                                + a0 * b.data[ijk]);
                    }
                }
            }
        }
    }

    /// `self += c · a`, truncated to the lower order.
    pub fn add_scaled(&mut self, c: f64, a: &Jet) {
        let m = self.order.min(a.order);
        if m < self.order {
            *self = self.truncate(m);
        }
        for (s, x) in self.data.iter_mut().zip(a.data.iter()) {
            *s += c * x;
        }
    }
}

impl Component for Jet {
    fn zero_like(&self) -> Self {
        Self::zero(self.dim, self.order)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        Jet::add_mul(self, a, b)
    }
    fn add_scaled(&mut self, c: f64, a: &Self) {
        Jet::add_scaled(self, c, a)
    }
    fn magnitude(&self) -> f64 {
        libm::fabs(self.value())
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let mut out = self.clone();
        out.add_scaled(1.0, o);
        out
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        let mut out = self.clone();
        out.add_scaled(-1.0, o);
        out
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let mut out = Jet::zero(self.dim, self.order.min(o.order));
        out.add_mul(self, o);
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, o: &Jet) {
        self.add_scaled(1.0, o)
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, o: &Jet) {
        self.add_scaled(-1.0, o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_jet(x: f64, y: f64) -> (Jet, Jet) {
        (Jet::coordinate(2, 3, 0, x), Jet::coordinate(2, 3, 1, y))
    }

    #[test]
    fn leibniz_product_of_polynomials() {
        // f = x^2 y, at (2, 3)
        let (x, y) = poly_jet(2.0, 3.0);
        let f = &(&x * &x) * &y;
        assert_eq!(f.value(), 12.0);
        assert_eq!(f.first(0), 12.0);
        assert_eq!(f.first(1), 4.0);
        assert_eq!(f.second(0, 0), 6.0);
        assert_eq!(f.second(0, 1), 4.0);
        assert_eq!(f.second(1, 0), 4.0);
        assert_eq!(f.second(1, 1), 0.0);
        assert_eq!(f.third(0, 0, 1), 2.0);
        assert_eq!(f.third(1, 0, 0), 2.0);
        assert_eq!(f.third(0, 0, 0), 0.0);
    }

    #[test]
    fn recip_matches_closed_form() {
        // 1/(1+x^2) at x=0.5: derivatives by hand
        let (x, _) = poly_jet(0.5, 0.0);
        let one = Jet::constant(2, 3, 1.0);
        let den = &one + &(&x * &x);
        let r = den.recip();
        let u = 1.25f64;
        assert!((r.value() - 1.0 / u).abs() < 1e-15);
        assert!((r.first(0) - (-2.0 * 0.5 / (u * u))).abs() < 1e-15);
        let f2 = (6.0 * 0.25 - 2.0) / (u * u * u);
        assert!((r.second(0, 0) - f2).abs() < 1e-14);
        let f3 = 24.0 * 0.5 * (1.0 - 0.25) / (u * u * u * u);
        assert!((r.third(0, 0, 0) - f3).abs() < 1e-13);
    }

    #[test]
    fn partial_shifts_order() {
        let (x, y) = poly_jet(1.0, 2.0);
        let f = &(&x * &y) * &y; // x y^2
        let fy = f.partial(1); // 2xy
        assert_eq!(fy.order(), 2);
        assert_eq!(fy.value(), 4.0);
        assert_eq!(fy.first(0), 4.0);
        assert_eq!(fy.first(1), 2.0);
        assert_eq!(fy.second(0, 1), 2.0);
    }

    #[test]
    fn mixed_orders_truncate() {
        let (x, _) = poly_jet(1.0, 2.0);
        let low = x.truncate(1);
        let p = &x * &low;
        assert_eq!(p.order(), 1);
        assert_eq!(p.first(0), 2.0);
    }

    #[test]
    fn restrict_keeps_leading_directions() {
        let x = Jet::coordinate(3, 3, 0, 0.5);
        let z = Jet::coordinate(3, 3, 2, 2.0);
        let f = &(&(&x * &x) * &z) * &x; // x³ z
        let r = f.restrict(2);
        assert_eq!(r.dim(), 2);
        assert_eq!(r.value(), 0.25);
        assert_eq!(r.first(0), 1.5);
        assert_eq!(r.first(1), 0.0);
        assert_eq!(r.second(0, 0), 6.0);
        assert_eq!(r.third(0, 0, 0), 12.0);
    }

    #[test]
    fn sqrt_chain_rule() {
        let (x, _) = poly_jet(4.0, 0.0);
        let s = x.sqrt();
        assert_eq!(s.value(), 2.0);
        assert!((s.first(0) - 0.25).abs() < 1e-15);
        assert!((s.second(0, 0) + 1.0 / 32.0).abs() < 1e-15);
        assert!((s.third(0, 0, 0) - 3.0 / 256.0).abs() < 1e-15);
    }
}
