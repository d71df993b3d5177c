//! Scalar abstraction shared by the double-precision and double-double
//! evaluation paths.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::dd::Dd;

pub trait Real:
    Copy
    + Debug
    + Default
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Unit roundoff of the type.
    const EPS: f64;
    /// Largest number of significant decimal digits the type can carry.
    const MAX_DIGITS: u32;

    fn from_f64(x: f64) -> Self;
    fn from_dd(x: Dd) -> Self;
    fn to_f64(self) -> f64;
    fn to_dd(self) -> Dd;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn pi() -> Self {
        Self::from_dd(Dd::PI)
    }
    fn tau() -> Self {
        Self::from_dd(Dd::TAU)
    }

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan2(y: Self, x: Self) -> Self;
    fn floor(self) -> Self;
    fn powi(self, n: i32) -> Self;

    /// `sin` and `cos` of `t * l` where `l` is known to double-double
    /// accuracy. The product is formed and reduced modulo `2 pi` in
    /// double-double before the trigonometric evaluation, so phases of size
    /// up to ~1e8 keep full relative accuracy in the result.
    fn sin_cos_product(t: Self, l: Dd) -> (Self, Self);

    /// `sin` and `cos` of `2 pi t x` where `x` is known to double-double
    /// accuracy; the integer part of `t x` is removed before scaling.
    fn sin_cos_turns(t: Self, x: Dd) -> (Self, Self);

    /// Reduce into `(-pi, pi]` keeping full accuracy of the remainder.
    fn rem_tau(self) -> Self;
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON / 2.0;
    const MAX_DIGITS: u32 = 16;

    #[inline(always)]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline(always)]
    fn from_dd(x: Dd) -> Self {
        x.to_f64()
    }
    #[inline(always)]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline(always)]
    fn to_dd(self) -> Dd {
        Dd::from_f64(self)
    }
    #[inline(always)]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline(always)]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline(always)]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline(always)]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline(always)]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    #[inline(always)]
    fn atan2(y: Self, x: Self) -> Self {
        f64::atan2(y, x)
    }
    #[inline(always)]
    fn floor(self) -> Self {
        f64::floor(self)
    }
    #[inline(always)]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline(always)]
    fn sin_cos_product(t: Self, l: Dd) -> (Self, Self) {
        let p = Dd::prod_f64(t, l.hi) + t * l.lo;
        p.rem_tau().to_f64().sin_cos()
    }
    #[inline(always)]
    fn sin_cos_turns(t: Self, x: Dd) -> (Self, Self) {
        let (p, e) = crate::dd::two_prod(t, x.hi);
        let k = p.round();
        let f = (p - k) + (e + t * x.lo);
        (std::f64::consts::TAU * f).sin_cos()
    }
    #[inline(always)]
    fn rem_tau(self) -> Self {
        Dd::from_f64(self).rem_tau().to_f64()
    }
}

impl Real for Dd {
    const EPS: f64 = crate::dd::DD_EPS;
    const MAX_DIGITS: u32 = 31;

    #[inline(always)]
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    #[inline(always)]
    fn from_dd(x: Dd) -> Self {
        x
    }
    #[inline(always)]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline(always)]
    fn to_dd(self) -> Dd {
        self
    }
    #[inline(always)]
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        Dd::sin_cos(self)
    }
    fn atan2(y: Self, x: Self) -> Self {
        Dd::atan2(y, x)
    }
    fn floor(self) -> Self {
        Dd::floor(self)
    }
    fn powi(self, n: i32) -> Self {
        Dd::powi(self, n)
    }
    fn sin_cos_product(t: Self, l: Dd) -> (Self, Self) {
        (t * l).sin_cos()
    }
    fn sin_cos_turns(t: Self, x: Dd) -> (Self, Self) {
        let p = t * x;
        ((p - p.round()) * Dd::TAU).sin_cos()
    }
    fn rem_tau(self) -> Self {
        Dd::rem_tau(self)
    }
}
