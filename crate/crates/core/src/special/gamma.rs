//! Complex log-gamma and digamma by upward recurrence plus the Stirling
//! series.

use crate::complex::Complex;
use crate::dd::Dd;
use crate::precision::Precision;
use crate::real::Real;

use super::bernoulli;

/// Radius beyond which the asymptotic series is summed directly.
fn stirling_radius<R: Real>(prec: Precision) -> f64 {
    if prec.digits().min(R::MAX_DIGITS) > 16 {
        20.0
    } else {
        10.0
    }
}

/// Number of unit shifts so that `Re(z + m) >= 1` and `|z + m| >= radius`.
fn shift_count<R: Real>(z: Complex<R>, radius: f64) -> usize {
    let (x, y) = (z.re.to_f64(), z.im.to_f64());
    let mut m = 0usize;
    if x < 1.0 {
        m = (1.0 - x).ceil() as usize;
    }
    let r2 = radius * radius;
    let xm = x + m as f64;
    if xm * xm + y * y < r2 {
        let need = (r2 - y * y).sqrt() - xm;
        m += need.ceil().max(0.0) as usize;
    }
    m
}

/// Principal branch of `ln Gamma(z)`, continuous off the non-positive real
/// axis. At non-positive integers the result is infinite.
pub fn ln_gamma<R: Real>(z: Complex<R>, prec: Precision) -> Complex<R> {
    let eps = prec.eps_for::<R>();
    let m = shift_count(z, stirling_radius::<R>(prec));
    let mut shift = Complex::<R>::zero();
    let mut w = z;
    for _ in 0..m {
        shift += w.ln();
        w = w + R::one();
    }
    let half_ln_tau = R::from_dd(Dd::TAU.ln()) * 0.5;
    let main = (w - R::from_f64(0.5)) * w.ln() - w + half_ln_tau;
    let inv = w.recip();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex::<R>::zero();
    let tab = bernoulli::table();
    let scale = main.abs().to_f64().max(1.0);
    let mut last = f64::INFINITY;
    for j in 1..=bernoulli::MAX_J {
        let term = pow * R::from_dd(tab.stirling[j]);
        let mag = term.abs().to_f64();
        if mag > last {
            break;
        }
        series += term;
        if mag < eps * scale * 0.01 {
            break;
        }
        last = mag;
        pow *= inv2;
    }
    main + series - shift
}

/// `psi(z) = Gamma'(z) / Gamma(z)`.
pub fn digamma<R: Real>(z: Complex<R>, prec: Precision) -> Complex<R> {
    let eps = prec.eps_for::<R>();
    let m = shift_count(z, stirling_radius::<R>(prec));
    let mut shift = Complex::<R>::zero();
    let mut w = z;
    for _ in 0..m {
        shift += w.recip();
        w = w + R::one();
    }
    let inv = w.recip();
    let inv2 = inv * inv;
    let main = w.ln() - inv * R::from_f64(0.5);
    let tab = bernoulli::table();
    let mut pow = inv2;
    let mut series = Complex::<R>::zero();
    let scale = main.abs().to_f64().max(1.0);
    let mut last = f64::INFINITY;
    for j in 1..=bernoulli::MAX_J {
        let term = pow * R::from_dd(tab.digamma[j]);
        let mag = term.abs().to_f64();
        if mag > last {
            break;
        }
        series += term;
        if mag < eps * scale * 0.01 {
            break;
        }
        last = mag;
        pow *= inv2;
    }
    main - series - shift
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{ComplexScalar, C64};
    use crate::dd::parse_decimal;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn integer_and_half_integer_values() {
        // ln Gamma(5) = ln 24, ln Gamma(1/2) = ln sqrt(pi)
        let v = ln_gamma(ComplexScalar::from_f64(5.0, 0.0), p());
        assert!((v.re - Dd::from_f64(24.0).ln()).abs().to_f64() < 1e-30);
        assert!(v.im.abs().to_f64() < 1e-30);
        let v = ln_gamma(ComplexScalar::from_f64(0.5, 0.0), p());
        assert!((v.re - Dd::PI.sqrt().ln()).abs().to_f64() < 1e-30);
    }

    #[test]
    fn recurrence_holds_off_axis() {
        let z = ComplexScalar::from_f64(0.25, 7.5);
        let a = ln_gamma(z + Dd::ONE, p());
        let b = ln_gamma(z, p()) + z.ln();
        assert!((a - b).abs().to_f64() < 1e-29);
    }

    #[test]
    fn reflection_modulus_on_critical_line() {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        let y = 3.0;
        let v = ln_gamma(ComplexScalar::from_f64(0.5, y), p());
        let expect = (Dd::PI / ((Dd::PI * y).exp() + (-(Dd::PI * y)).exp()).scale(0.5)).ln() * 0.5;
        assert!((v.re - expect).abs().to_f64() < 1e-29);
    }

    #[test]
    fn double_path_agrees_with_extended() {
        for &(x, y) in &[(0.25, 0.5), (-0.4, 30.0), (1.3, -200.0), (0.75, 5000.0)] {
            let a = ln_gamma(C64::from_f64(x, y), Precision::double());
            let b = ln_gamma(ComplexScalar::from_f64(x, y), p());
            let scale = b.abs().to_f64().max(1.0);
            assert!((a - b.to_c64()).abs() < 1e-14 * scale, "z=({x},{y})");
        }
    }

    #[test]
    fn digamma_values() {
        // psi(1) = -gamma_0
        let g0 = parse_decimal("0.57721566490153286060651209008240243").unwrap();
        let v = digamma(ComplexScalar::from_f64(1.0, 0.0), p());
        assert!((v.re + g0).abs().to_f64() < 1e-30);
        // psi(z+1) = psi(z) + 1/z
        let z = ComplexScalar::from_f64(-0.3, 12.0);
        let d = digamma(z + Dd::ONE, p()) - digamma(z, p()) - z.recip();
        assert!(d.abs().to_f64() < 1e-29);
    }
}
