//! Scalar types that closed-form component functions are written against.
//!
//! A closed form is evaluated once per scalar type: plain `f64` for values and
//! nested first-order dual numbers for derivatives. `Dual<T>` carries one
//! infinitesimal direction; nesting it three deep (`D3`) yields a single third
//! partial `∂_a ∂_b ∂_c f` per evaluation, exact up to rounding.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::field::ComponentFn;

/// Arithmetic and elementary functions shared by `f64` and every dual level.
pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    /// Real part, stripping every infinitesimal.
    fn re(&self) -> f64;
    fn scale(self, c: f64) -> Self;
    fn recip(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn tanh(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn is_finite(&self) -> bool;

    fn sech(self) -> Self {
        self.cosh().recip()
    }
    fn square(self) -> Self {
        self * self
    }
    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn one() -> Self {
        Self::cst(1.0)
    }
}

/// A [`Real`] that can also call into a type-erased component function.
///
/// Implemented for exactly the four evaluation types, which lets closed forms
/// compose other fields generically (lifts, block assemblies, rescalings).
pub trait Scalar: Real {
    fn eval_field(f: &dyn ComponentFn, x: &[Self], out: &mut [Self]);
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        self * c
    }
    #[inline]
    fn recip(self) -> Self {
        1.0 / self
    }
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }
    fn exp(self) -> Self {
        libm::exp(self)
    }
    fn ln(self) -> Self {
        libm::log(self)
    }
    fn sin(self) -> Self {
        libm::sin(self)
    }
    fn cos(self) -> Self {
        libm::cos(self)
    }
    fn sinh(self) -> Self {
        libm::sinh(self)
    }
    fn cosh(self) -> Self {
        libm::cosh(self)
    }
    fn tanh(self) -> Self {
        libm::tanh(self)
    }
    fn powi(self, n: i32) -> Self {
        let mut acc = 1.0;
        let mut base = if n < 0 { 1.0 / self } else { self };
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for f64 {
    fn eval_field(f: &dyn ComponentFn, x: &[Self], out: &mut [Self]) {
        f.eval_f64(x, out)
    }
}

/// First-order dual number `re + eps·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

pub type D1 = Dual<f64>;
pub type D2 = Dual<D1>;
pub type D3 = Dual<D2>;

impl<T: Real> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Self { re, eps }
    }

    /// Chain rule for a unary map with value `f` and derivative `df` at `re`.
    #[inline]
    fn chain(f: T, df: T, eps: T) -> Self {
        Self { re: f, eps: df * eps }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, eps: self.eps + o.eps }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, eps: self.eps - o.eps }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re, eps: self.re * o.eps + self.eps * o.re }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let q = self.re / o.re;
        Self { re: q, eps: (self.eps - q * o.eps) / o.re }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { re: -self.re, eps: -self.eps }
    }
}

impl<T: Real> Real for Dual<T> {
    fn cst(v: f64) -> Self {
        Self { re: T::cst(v), eps: T::zero() }
    }
    fn re(&self) -> f64 {
        self.re.re()
    }
    fn scale(self, c: f64) -> Self {
        Self { re: self.re.scale(c), eps: self.eps.scale(c) }
    }
    fn recip(self) -> Self {
        let r = self.re.recip();
        Self::chain(r, -(r * r), self.eps)
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Self::chain(s, (s + s).recip(), self.eps)
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Self::chain(e, e, self.eps)
    }
    fn ln(self) -> Self {
        Self::chain(self.re.ln(), self.re.recip(), self.eps)
    }
    fn sin(self) -> Self {
        Self::chain(self.re.sin(), self.re.cos(), self.eps)
    }
    fn cos(self) -> Self {
        Self::chain(self.re.cos(), -self.re.sin(), self.eps)
    }
    fn sinh(self) -> Self {
        Self::chain(self.re.sinh(), self.re.cosh(), self.eps)
    }
    fn cosh(self) -> Self {
        Self::chain(self.re.cosh(), self.re.sinh(), self.eps)
    }
    fn tanh(self) -> Self {
        let t = self.re.tanh();
        Self::chain(t, T::one() - t * t, self.eps)
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let lower = self.re.powi(n - 1);
        Self::chain(lower * self.re, lower.scale(n as f64), self.eps)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.eps.is_finite()
    }
}

impl Scalar for D1 {
    fn eval_field(f: &dyn ComponentFn, x: &[Self], out: &mut [Self]) {
        f.eval_d1(x, out)
    }
}

impl Scalar for D2 {
    fn eval_field(f: &dyn ComponentFn, x: &[Self], out: &mut [Self]) {
        f.eval_d2(x, out)
    }
}

impl Scalar for D3 {
    fn eval_field(f: &dyn ComponentFn, x: &[Self], out: &mut [Self]) {
        f.eval_d3(x, out)
    }
}

/// Seeds a coordinate of a first-order dual along `dir`.
pub(crate) fn seed1(x: f64, on: bool) -> D1 {
    Dual::new(x, if on { 1.0 } else { 0.0 })
}

pub(crate) fn seed2(x: f64, outer: bool, inner: bool) -> D2 {
    Dual::new(seed1(x, inner), Dual::new(if outer { 1.0 } else { 0.0 }, 0.0))
}

pub(crate) fn seed3(x: f64, outer: bool, middle: bool, inner: bool) -> D3 {
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    Dual::new(seed2(x, middle, inner), Dual::new(Dual::new(flag(outer), 0.0), Dual::new(0.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly<S: Real>(x: S) -> S {
        // x^3 - 2x + 1
        x * x * x - x.scale(2.0) + S::one()
    }

    #[test]
    fn nested_duals_give_successive_derivatives() {
        let x = seed3(1.5, true, true, true);
        let y = poly(x);
        assert_eq!(y.re(), 1.5f64.powi(3) - 3.0 + 1.0);
        // third derivative of x^3 is 6
        assert_eq!(y.eps.eps.eps, 6.0);
        // second derivative 6x
        assert!((y.re.eps.eps - 9.0).abs() < 1e-15);
        assert!((y.eps.re.eps - 9.0).abs() < 1e-15);
        assert!((y.eps.eps.re - 9.0).abs() < 1e-15);
        // first derivative 3x^2 - 2
        assert!((y.re.re.eps - (3.0 * 2.25 - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn elementary_function_derivatives() {
        let x = seed2(0.3, true, true);
        let t = x.tanh();
        let th = libm::tanh(0.3);
        assert!((t.re.eps - (1.0 - th * th)).abs() < 1e-15);
        assert!((t.eps.eps - (-2.0 * th * (1.0 - th * th))).abs() < 1e-15);
        let s = x.sqrt();
        assert!((s.eps.eps + 0.25 * libm::pow(0.3, -1.5)).abs() < 1e-12);
        let p = x.powi(-2);
        assert!((p.eps.eps - 6.0 * libm::pow(0.3, -4.0)).abs() < 1e-9);
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(Real::powi(1.7f64, 3), 1.7 * 1.7 * 1.7);
        assert_eq!(Real::powi(2.0f64, -2), 0.25);
        assert_eq!(Real::powi(5.0f64, 0), 1.0);
    }
}
