//! Riemann–Siegel theta, Hardy's Z function, the Riemann–Siegel formula and
//! Gram points.

use std::sync::OnceLock;

use crate::complex::Complex;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::real::Real;

use super::gamma::{digamma, ln_gamma};
use super::zeta::{ln_int, zeta_taylor};

/// `theta(t) = Im ln Gamma(1/4 + it/2) - (t/2) ln pi`, continuous branch
/// with `theta(0) = 0`.
pub fn theta_dd(t: Dd) -> Dd {
    let z = Complex::new(Dd::from_f64(0.25), t * 0.5);
    let lg = ln_gamma(z, Precision::default());
    lg.im - t * Dd::PI.ln() * 0.5
}

/// `theta(t)` rounded to double.
pub fn theta(t: f64) -> f64 {
    theta_dd(Dd::from_f64(t)).to_f64()
}

/// `theta'(t) = Re psi(1/4 + it/2) / 2 - (ln pi)/2`.
pub fn theta_prime(t: f64) -> f64 {
    let z = Complex::new(0.25, 0.5 * t);
    let d = digamma(z, Precision::double());
    0.5 * d.re - 0.5 * std::f64::consts::PI.ln()
}

/// `e^{i theta(t)} zeta(1/2 + it)` at the requested precision; the imaginary
/// part vanishes up to rounding.
pub fn hardy_z_complex<R: Real>(t: R, prec: Precision) -> Result<Complex<R>> {
    let th = theta_dd(t.to_dd()).rem_tau();
    let rot = Complex::<R>::cis(R::from_dd(th));
    let s = Complex::new(R::from_f64(0.5), t);
    let z = zeta_taylor(s, 0, prec)?[0];
    Ok(rot * z)
}

/// Hardy's `Z(t)`, real for real `t`.
pub fn hardy_z<R: Real>(t: R, prec: Precision) -> Result<R> {
    Ok(hardy_z_complex(t, prec)?.re)
}

/// `Z(t)` and `Z'(t)` from one Euler–Maclaurin pass.
pub fn hardy_z_and_derivative_generic<R: Real>(t: R, prec: Precision) -> Result<(R, R)> {
    let th = theta_dd(t.to_dd()).rem_tau();
    let half = R::from_f64(0.5);
    let psi = digamma(Complex::new(R::from_f64(0.25), t * half), prec);
    let dth = psi.re * half - R::from_dd(Dd::PI.ln()) * half;
    let rot = Complex::<R>::cis(R::from_dd(th));
    let c = zeta_taylor(Complex::new(half, t), 1, prec)?;
    let i = Complex::<R>::i();
    let z = rot * c[0];
    let dz = rot * (c[0].scale(dth) * i + c[1] * i);
    Ok((z.re, dz.re))
}

/// `Z(t)` and `Z'(t)` in double precision.
pub fn hardy_z_and_derivative(t: f64) -> Result<(f64, f64)> {
    hardy_z_and_derivative_generic(t, Precision::double())
}

/// Taylor coefficients in `u = p - 1/2` of
/// `Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)`.
fn psi_series() -> &'static [f64] {
    static SERIES: OnceLock<Vec<f64>> = OnceLock::new();
    SERIES.get_or_init(|| {
        const LEN: usize = 50;
        // Psi = -cos(2 pi u^2 - 5 pi/8) / cos(2 pi u)
        let two_pi = Dd::TAU;
        let (s58, c58) = (Dd::PI * 0.625).sin_cos();
        // cos(2 pi u^2 - a) = cos a cos(2 pi u^2) + sin a sin(2 pi u^2)
        let mut num = vec![Dd::ZERO; LEN];
        let mut den = vec![Dd::ZERO; LEN];
        let mut term = Dd::ONE; // (2 pi)^k / k!
        for k in 0..LEN {
            if k > 0 {
                term = term * two_pi / (k as f64);
            }
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if 2 * k < LEN {
                // (2 pi u^2)^k / k! contributes to u^{2k}
                if k % 2 == 0 {
                    num[2 * k] += c58 * term * sign;
                } else {
                    num[2 * k] += s58 * term * sign;
                }
            }
            // cos(2 pi u) = sum (-1)^{k/2} (2 pi u)^k / k!, k even
            if k % 2 == 0 {
                den[k] = term * sign;
            }
        }
        let mut q = vec![Dd::ZERO; LEN];
        for k in 0..LEN {
            let mut acc = -num[k];
            for j in 1..=k {
                acc -= den[j] * q[k - j];
            }
            q[k] = acc / den[0];
        }
        q.into_iter().map(|x| x.to_f64()).collect()
    })
}

/// `Psi^{(d)}` evaluated at `u` from the Taylor series.
fn psi_derivative(u: f64, d: usize) -> f64 {
    let c = psi_series();
    let mut acc = 0.0;
    for k in (d..c.len()).rev() {
        let mut f = 1.0;
        for j in 0..d {
            f *= (k - j) as f64;
        }
        acc = acc * u + c[k] * f;
    }
    acc
}

/// Riemann–Siegel correction coefficients `C_0, C_1, C_2` at fractional
/// part `p`.
pub fn rs_coefficients(p: f64) -> [f64; 3] {
    let u = p - 0.5;
    let d = |k| psi_derivative(u, k);
    let pi2 = std::f64::consts::PI.powi(2);
    [
        d(0),
        -d(3) / (96.0 * pi2),
        d(2) / (64.0 * pi2) + d(6) / (18432.0 * pi2 * pi2),
    ]
}

/// Hardy `Z(t)` by the Riemann–Siegel formula with `terms` correction
/// coefficients (`1..=3`).
pub fn hardy_z_rs(t: f64, terms: usize) -> f64 {
    let th = theta_dd(Dd::from_f64(t));
    let tau = (t / std::f64::consts::TAU).sqrt();
    let m = tau.floor() as usize;
    let mut sum = 0.0;
    for n in 1..=m {
        let phase = (th - Dd::from_f64(t) * ln_int(n)).rem_tau().to_f64();
        sum += phase.cos() / (n as f64).sqrt();
    }
    let p = tau - m as f64;
    let c = rs_coefficients(p);
    let w = (std::f64::consts::TAU / t).sqrt();
    let mut corr = 0.0;
    let mut wp = 1.0;
    for ck in c.iter().take(terms.clamp(1, 3)) {
        corr += ck * wp;
        wp *= w;
    }
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * sum + sign * w.sqrt() * corr
}

/// Gram point `g_n`: the solution of `theta(g_n) = n pi` on `t > 7`.
pub fn gram_point(n: i64) -> Result<f64> {
    if n < -1 {
        return Err(Error::Domain {
            op: "gram_point",
            reason: format!("index {n} below -1"),
        });
    }
    let target = Dd::PI * (n as f64);
    // asymptotic starting value: t/2 ln(t/2pi e) ~ n pi + pi/8
    let goal = std::f64::consts::PI * (n as f64 + 0.125);
    let mut t = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    for _ in 0..60 {
        let f = 0.5 * t * (t / (std::f64::consts::TAU * std::f64::consts::E)).ln() - goal;
        let df = 0.5 * (t / std::f64::consts::TAU).ln();
        let step = f / df;
        t -= step;
        if step.abs() < 1e-10 * t {
            break;
        }
    }
    t = t.max(8.0);
    for _ in 0..8 {
        let f = (theta_dd(Dd::from_f64(t)) - target).to_f64();
        let step = f / theta_prime(t);
        t -= step;
        if step.abs() < 1e-14 * t {
            break;
        }
    }
    Ok(t)
}
