//! The functional-equation factor `chi(s)`, its Stirling main term and its
//! logarithmic derivative.

use crate::complex::Complex;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::real::Real;

use super::gamma::{digamma, ln_gamma};

/// `l(t) = log(t / 2 pi)`.
pub fn ell<R: Real>(t: R) -> R {
    (t / R::tau()).ln()
}

/// Points where `chi` has a pole (`s = 1, 3, 5, ...`) or a zero
/// (`s = 0, -2, -4, ...`).
fn check_singular<R: Real>(s: Complex<R>) -> Result<()> {
    let x = s.re.to_f64();
    if s.im.to_f64().abs() > 1e-25 {
        return Ok(());
    }
    let k = x.round();
    if (s.re - R::from_f64(k)).abs().to_f64() > 1e-25 {
        return Ok(());
    }
    let odd_positive = k >= 1.0 && (k as i64) % 2 == 1;
    let even_nonpositive = k <= 0.0 && (k as i64) % 2 == 0;
    if odd_positive || even_nonpositive {
        return Err(Error::ChiSingular { re: x, im: s.im.to_f64() });
    }
    Ok(())
}

/// `ln chi(s) = (s - 1/2) ln pi + ln Gamma((1-s)/2) - ln Gamma(s/2)`
/// (any branch; only `exp` of it is used).
pub fn ln_chi<R: Real>(s: Complex<R>, prec: Precision) -> Result<Complex<R>> {
    check_singular(s)?;
    let half = R::from_f64(0.5);
    let a = (Complex::real(R::one()) - s).scale(half);
    let b = s.scale(half);
    let ln_pi = R::from_dd(Dd::PI.ln());
    Ok((s - half) * ln_pi + ln_gamma(a, prec) - ln_gamma(b, prec))
}

/// `chi(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s)`, so that
/// `zeta(s) = chi(s) zeta(1 - s)`.
pub fn chi_generic<R: Real>(s: Complex<R>, prec: Precision) -> Result<Complex<R>> {
    let l = ln_chi(s, prec)?;
    // keep the phase small before exponentiating
    Ok(Complex::from_polar(l.re.exp(), l.im.rem_tau()))
}

/// Stirling main term `(t/2pi)^{1/2 - sigma - it} e^{i(t + pi/4)}`.
pub fn chi_stirling_generic<R: Real>(s: Complex<R>) -> Result<Complex<R>> {
    let t = s.im;
    if t.to_f64() < 1.0 {
        return Err(Error::Domain {
            op: "chi_stirling",
            reason: format!("requires Im s >= 1, got {}", t.to_f64()),
        });
    }
    let l = ell(t);
    let modulus = ((R::from_f64(0.5) - s.re) * l).exp();
    let phase = t - t * l + R::pi() * 0.25;
    Ok(Complex::from_polar(modulus, phase.rem_tau()))
}

/// `chi'(s) / chi(s) = ln pi - psi((1-s)/2)/2 - psi(s/2)/2`.
pub fn chi_log_deriv_generic<R: Real>(s: Complex<R>, prec: Precision) -> Result<Complex<R>> {
    if s.re.to_f64().abs() > 2.0 || s.im.to_f64() <= 1.0 {
        return Err(Error::Domain {
            op: "chi_log_deriv",
            reason: format!("requires |Re s| <= 2 and Im s > 1, got {s}"),
        });
    }
    let half = R::from_f64(0.5);
    let a = (Complex::real(R::one()) - s).scale(half);
    let b = s.scale(half);
    let ln_pi = R::from_dd(Dd::PI.ln());
    Ok(Complex::real(ln_pi) - (digamma(a, prec) + digamma(b, prec)).scale(half))
}
