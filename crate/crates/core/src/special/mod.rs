//! Special functions: Gamma, zeta, chi, Hardy's Z and Stieltjes constants.
//!
//! The `*_generic` evaluators run on either scalar path; the plain wrappers
//! below take and return [`ComplexScalar`] values.

pub mod bernoulli;
pub mod chi;
pub mod gamma;
pub mod hardy;
pub mod stieltjes;
pub mod zeta;

use crate::complex::ComplexScalar;
use crate::error::Result;
use crate::precision::Precision;

pub use chi::{chi_generic, chi_log_deriv_generic, chi_stirling_generic, ell};
pub use hardy::{
    gram_point, hardy_z, hardy_z_and_derivative, hardy_z_and_derivative_generic, hardy_z_rs, theta,
    theta_dd,
};
pub use stieltjes::{stieltjes, stieltjes_constants, StieltjesConstants};
pub use zeta::{zeta_deriv_generic, zeta_derivs, zeta_generic, zeta_taylor};

/// `zeta(s)`.
pub fn zeta(s: ComplexScalar, prec: Precision) -> Result<ComplexScalar> {
    zeta_generic(s, prec)
}

/// `zeta^{(nu)}(s)` for `nu <= 6`.
pub fn zeta_deriv(s: ComplexScalar, nu: usize, prec: Precision) -> Result<ComplexScalar> {
    zeta_deriv_generic(s, nu, prec)
}

/// `chi(s)` with `zeta(s) = chi(s) zeta(1 - s)`.
pub fn chi(s: ComplexScalar, prec: Precision) -> Result<ComplexScalar> {
    chi_generic(s, prec)
}

/// Stirling main term of `chi(s)`.
pub fn chi_stirling(s: ComplexScalar) -> Result<ComplexScalar> {
    chi_stirling_generic(s)
}

/// `chi'(s) / chi(s)`.
pub fn chi_log_deriv(s: ComplexScalar, prec: Precision) -> Result<ComplexScalar> {
    chi_log_deriv_generic(s, prec)
}

/// Riemann–Siegel theta on the continuous branch.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    theta(t)
}
