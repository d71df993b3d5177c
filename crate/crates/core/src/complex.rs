//! Complex numbers over either scalar path.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::real::Real;

#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

/// Extended-precision complex value (double-double components).
pub type ComplexScalar = Complex<Dd>;

/// Double-precision complex value.
pub type C64 = Complex<f64>;

impl<R: Real> Complex<R> {
    #[inline(always)]
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }

    #[inline(always)]
    pub fn from_f64(re: f64, im: f64) -> Self {
        Complex {
            re: R::from_f64(re),
            im: R::from_f64(im),
        }
    }

    #[inline(always)]
    pub fn real(re: R) -> Self {
        Complex { re, im: R::zero() }
    }

    pub fn zero() -> Self {
        Complex::real(R::zero())
    }

    pub fn one() -> Self {
        Complex::real(R::one())
    }

    pub fn i() -> Self {
        Complex::new(R::zero(), R::one())
    }

    #[inline(always)]
    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    #[inline(always)]
    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> R {
        let (a, b) = (self.re.abs(), self.im.abs());
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big.to_f64() == 0.0 {
            return R::zero();
        }
        let r = small / big;
        big * (r * r + 1.0).sqrt()
    }

    pub fn arg(self) -> R {
        R::atan2(self.im, self.re)
    }

    #[inline(always)]
    pub fn scale(self, k: R) -> Self {
        Complex::new(self.re * k, self.im * k)
    }

    #[inline(always)]
    pub fn scale_f64(self, k: f64) -> Self {
        Complex::new(self.re * k, self.im * k)
    }

    /// `e^{i phi}`.
    pub fn cis(phi: R) -> Self {
        let (s, c) = phi.sin_cos();
        Complex::new(c, s)
    }

    pub fn from_polar(r: R, phi: R) -> Self {
        Complex::cis(phi).scale(r)
    }

    pub fn exp(self) -> Self {
        Complex::from_polar(self.re.exp(), self.im)
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }

    pub fn recip(self) -> Self {
        let d = self.norm_sqr();
        Complex::new(self.re / d, -self.im / d)
    }

    /// Principal `self^w`.
    pub fn powc(self, w: Self) -> Self {
        if self.re.to_f64() == 0.0 && self.im.to_f64() == 0.0 {
            return Complex::zero();
        }
        (self.ln() * w).exp()
    }

    pub fn is_finite(self) -> bool {
        self.re.to_f64().is_finite() && self.im.to_f64().is_finite()
    }

    pub fn to_c64(self) -> C64 {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_dd(self) -> ComplexScalar {
        Complex::new(self.re.to_dd(), self.im.to_dd())
    }

    pub fn from_c64(z: C64) -> Self {
        Complex::from_f64(z.re, z.im)
    }
}

impl<R: Real> fmt::Debug for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl<R: Real> fmt::Display for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re.to_f64(), self.im.to_f64());
        if im < 0.0 {
            write!(f, "{re:e} - {:e}i", -im)
        } else {
            write!(f, "{re:e} + {im:e}i")
        }
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn add(self, b: Self) -> Self {
        Complex::new(self.re + b.re, self.im + b.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, b: Self) -> Self {
        Complex::new(self.re - b.re, self.im - b.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn mul(self, b: Self) -> Self {
        Complex::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl<R: Real> Div for Complex<R> {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        // Smith's algorithm
        if b.re.abs() >= b.im.abs() {
            let r = b.im / b.re;
            let d = b.re + b.im * r;
            Complex::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = b.re / b.im;
            let d = b.re * r + b.im;
            Complex::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

impl<R: Real> Add<R> for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn add(self, b: R) -> Self {
        Complex::new(self.re + b, self.im)
    }
}

impl<R: Real> Sub<R> for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, b: R) -> Self {
        Complex::new(self.re - b, self.im)
    }
}

impl<R: Real> Mul<R> for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn mul(self, b: R) -> Self {
        self.scale(b)
    }
}

impl<R: Real> Div<R> for Complex<R> {
    type Output = Self;
    #[inline(always)]
    fn div(self, b: R) -> Self {
        Complex::new(self.re / b, self.im / b)
    }
}

impl<R: Real> AddAssign for Complex<R> {
    #[inline(always)]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl<R: Real> SubAssign for Complex<R> {
    #[inline(always)]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl<R: Real> MulAssign for Complex<R> {
    #[inline(always)]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl<R: Real> DivAssign for Complex<R> {
    fn div_assign(&mut self, b: Self) {
        *self = *self / b;
    }
}

impl<R: Real> Sum for Complex<R> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Complex::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_ln_inverse_in_both_paths() {
        let z = C64::from_f64(0.3, -2.0);
        let w = z.ln().exp();
        assert!((w - z).abs() < 1e-15);
        let z = ComplexScalar::from_f64(0.3, -2.0);
        let w = z.ln().exp();
        assert!((w - z).abs().to_f64() < 1e-30);
    }

    #[test]
    fn division_matches_multiplication_by_reciprocal() {
        let a = ComplexScalar::from_f64(1.5, 2.5);
        let b = ComplexScalar::from_f64(-0.25, 4.0);
        let q = a / b;
        assert!(((q * b) - a).abs().to_f64() < 1e-30);
    }

    #[test]
    fn powc_of_real_base_on_critical_line_has_sqrt_modulus() {
        let x = ComplexScalar::from_f64(3.0, 0.0);
        let rho = ComplexScalar::from_f64(0.5, 14.134725);
        let p = x.powc(rho);
        assert!((p.abs().to_f64() - 3f64.sqrt()).abs() < 1e-14);
    }
}
