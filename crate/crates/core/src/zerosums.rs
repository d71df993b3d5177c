//! Direct sums over zeros `rho = 1/2 + i gamma` in a window.
//!
//! Terms are evaluated independently (in parallel) and reduced in a fixed
//! pairwise order, so results do not depend on the thread count. Precision
//! of at most 16 digits selects the double tier for term evaluation.

use rayon::prelude::*;

use crate::complex::{Complex, ComplexScalar, C64};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::real::Real;
use crate::special::chi::{chi_generic, ell};
use crate::special::zeta::{zeta_taylor, MAX_ORDER};
use crate::summation::{pairwise_sum, ComplexCompensatedSum, PAIRWISE_BLOCK};
use crate::zeros::ZeroWindow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SumKind {
    /// `sum chi(rho) X^rho`
    ChiXRho,
    /// `sum X^rho`
    XRho,
    /// `sum X^{-rho}`
    XNegRho,
    /// `sum zeta^{(nu)}(rho)`
    ZetaDeriv,
    /// `sum chi(rho) n^rho l(gamma)^k`
    ChiWeighted,
}

/// A validated sum over the zeros of a window.
#[derive(Clone, Copy, Debug)]
pub struct SumSpec<'a> {
    kind: SumKind,
    x: f64,
    nu: u32,
    window: ZeroWindow<'a>,
}

impl<'a> SumSpec<'a> {
    /// `x` is `X` (or `n` for [`SumKind::ChiWeighted`]); `nu` is the
    /// derivative order or the power of `l(gamma)`.
    pub fn new(kind: SumKind, x: f64, nu: u32, window: ZeroWindow<'a>) -> Result<Self> {
        let bad = |reason: String| Err(Error::InvalidArgument(reason));
        match kind {
            SumKind::ChiXRho if !(x >= 1.0 && x.is_finite()) => return bad(format!("X = {x} must be >= 1")),
            SumKind::XRho | SumKind::XNegRho if !(x > 0.0 && x.is_finite()) => {
                return bad(format!("X = {x} must be positive"))
            }
            SumKind::ZetaDeriv if !(1..=MAX_ORDER as u32).contains(&nu) => {
                return bad(format!("derivative order {nu} outside 1..={MAX_ORDER}"))
            }
            SumKind::ChiWeighted if !(x >= 1.0 && x.fract() == 0.0 && x < 2f64.powi(53)) => {
                return bad(format!("n = {x} must be a positive integer"))
            }
            SumKind::ChiWeighted if nu as usize > MAX_ORDER => {
                return bad(format!("power {nu} of l(gamma) exceeds {MAX_ORDER}"))
            }
            _ => {}
        }
        Ok(SumSpec { kind, x, nu, window })
    }

    pub fn kind(&self) -> SumKind {
        self.kind
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn window(&self) -> ZeroWindow<'a> {
        self.window
    }

    pub fn evaluate(&self, prec: Precision) -> Result<ComplexScalar> {
        self.run(prec, true)
    }

    /// Serial left-to-right accumulation; for cross-checking the parallel
    /// reduction.
    pub fn evaluate_serial(&self, prec: Precision) -> Result<ComplexScalar> {
        self.run(prec, false)
    }

    /// Running totals: entry `k` is the sum over the first `k + 1` ordinates
    /// of the window.
    pub fn partial_sums(&self, prec: Precision) -> Result<Vec<ComplexScalar>> {
        let terms: Vec<ComplexScalar> = if prec.digits() <= f64::MAX_DIGITS {
            self.terms::<f64>(prec, true)?
                .into_iter()
                .map(ComplexScalar::from_c64)
                .collect()
        } else {
            self.terms::<Dd>(prec, true)?
        };
        let mut acc = ComplexScalar::zero();
        Ok(terms
            .into_iter()
            .map(|z| {
                acc += z;
                acc
            })
            .collect())
    }

    fn run(&self, prec: Precision, parallel: bool) -> Result<ComplexScalar> {
        if prec.digits() <= f64::MAX_DIGITS {
            let terms = self.terms::<f64>(prec, parallel)?;
            let s = if parallel {
                pairwise_sum(&terms)
            } else {
                let mut acc = ComplexCompensatedSum::new();
                terms.iter().for_each(|&z| acc.add(z));
                acc.value()
            };
            Ok(ComplexScalar::from_c64(s))
        } else {
            let terms = self.terms::<Dd>(prec, parallel)?;
            Ok(if parallel {
                pairwise_dd(&terms)
            } else {
                terms.into_iter().sum()
            })
        }
    }

    fn terms<R: Real>(&self, prec: Precision, parallel: bool) -> Result<Vec<Complex<R>>> {
        let g = self.window.ordinates();
        let ctx = TermContext::new(self);
        if parallel {
            g.par_iter().map(|&gamma| ctx.term::<R>(gamma, prec)).collect()
        } else {
            g.iter().map(|&gamma| ctx.term::<R>(gamma, prec)).collect()
        }
    }
}

struct TermContext {
    kind: SumKind,
    nu: usize,
    ln_x: Dd,
    sqrt_x: Dd,
}

impl TermContext {
    fn new(spec: &SumSpec<'_>) -> Self {
        let x = Dd::from_f64(spec.x);
        TermContext {
            kind: spec.kind,
            nu: spec.nu as usize,
            ln_x: x.ln(),
            sqrt_x: x.sqrt(),
        }
    }

    fn term<R: Real>(&self, gamma: Dd, prec: Precision) -> Result<Complex<R>> {
        let gr = R::from_dd(gamma);
        // X^{1/2 + i gamma} with the phase gamma ln X reduced in double-double
        let x_rho = || {
            let (s, c) = Dd::sin_cos_product(gamma, self.ln_x);
            Complex::new(R::from_dd(c), R::from_dd(s)).scale(R::from_dd(self.sqrt_x))
        };
        let chi = || -> Result<Complex<R>> {
            let c = chi_generic(Complex::new(Dd::from_f64(0.5), gamma), prec_dd(prec))?;
            Ok(Complex::new(R::from_dd(c.re), R::from_dd(c.im)))
        };
        Ok(match self.kind {
            SumKind::ChiXRho => chi()? * x_rho(),
            SumKind::XRho => x_rho(),
            SumKind::XNegRho => x_rho().recip(),
            SumKind::ZetaDeriv => {
                let c = zeta_taylor(Complex::new(R::from_f64(0.5), gr), self.nu, prec)?;
                c[self.nu].scale(R::from_f64(factorial(self.nu)))
            }
            SumKind::ChiWeighted => {
                let l = ell(gamma).powi(self.nu as i32);
                (chi()? * x_rho()).scale(R::from_dd(l))
            }
        })
    }
}

fn prec_dd(prec: Precision) -> Precision {
    if prec.digits() <= f64::MAX_DIGITS {
        Precision::default()
    } else {
        prec
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn pairwise_dd(terms: &[ComplexScalar]) -> ComplexScalar {
    fn tree(leaves: &[ComplexScalar]) -> ComplexScalar {
        match leaves.len() {
            0 => ComplexScalar::zero(),
            1 => leaves[0],
            n => tree(&leaves[..n / 2]) + tree(&leaves[n / 2..]),
        }
    }
    let leaves: Vec<ComplexScalar> = terms.chunks(PAIRWISE_BLOCK).map(|b| b.iter().copied().sum()).collect();
    tree(&leaves)
}

/// `S(X, T)`-type sum `sum chi(rho) X^rho`, with `chi` in closed form.
pub fn sum_chi_x_rho(window: ZeroWindow<'_>, x: f64, prec: Precision) -> Result<ComplexScalar> {
    SumSpec::new(SumKind::ChiXRho, x, 0, window)?.evaluate(prec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerSign {
    Plus,
    Minus,
}

/// `sum X^rho` (`Plus`) or `sum X^{-rho}` (`Minus`).
pub fn sum_x_rho(window: ZeroWindow<'_>, x: f64, sign: PowerSign, prec: Precision) -> Result<ComplexScalar> {
    let kind = match sign {
        PowerSign::Plus => SumKind::XRho,
        PowerSign::Minus => SumKind::XNegRho,
    };
    SumSpec::new(kind, x, 0, window)?.evaluate(prec)
}

/// `sum zeta^{(nu)}(rho)` for `1 <= nu <= 6`.
pub fn sum_zeta_deriv(window: ZeroWindow<'_>, nu: u32, prec: Precision) -> Result<ComplexScalar> {
    SumSpec::new(SumKind::ZetaDeriv, 0.0, nu, window)?.evaluate(prec)
}

/// `sum zeta^{(nu)}(rho)` for every `nu` in `0..=max_nu` from one
/// Taylor-jet pass per zero.
pub fn sum_zeta_derivs(window: ZeroWindow<'_>, max_nu: u32, prec: Precision) -> Result<Vec<ComplexScalar>> {
    let order = max_nu as usize;
    if order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("derivative order {max_nu} exceeds {MAX_ORDER}")));
    }
    fn jets<R: Real>(g: &[Dd], order: usize, prec: Precision) -> Result<Vec<Vec<Complex<R>>>> {
        g.par_iter()
            .map(|&gamma| {
                let c = zeta_taylor(Complex::new(R::from_f64(0.5), R::from_dd(gamma)), order, prec)?;
                Ok(c.into_iter()
                    .enumerate()
                    .map(|(k, z)| z.scale(R::from_f64(factorial(k))))
                    .collect())
            })
            .collect()
    }
    let g = window.ordinates();
    if prec.digits() <= f64::MAX_DIGITS {
        let j = jets::<f64>(g, order, prec)?;
        Ok((0..=order)
            .map(|k| {
                let col: Vec<C64> = j.iter().map(|v| v[k]).collect();
                ComplexScalar::from_c64(pairwise_sum(&col))
            })
            .collect())
    } else {
        let j = jets::<Dd>(g, order, prec)?;
        Ok((0..=order)
            .map(|k| {
                let col: Vec<ComplexScalar> = j.iter().map(|v| v[k]).collect();
                pairwise_dd(&col)
            })
            .collect())
    }
}

/// `sum chi(rho) n^rho l(gamma)^k`.
pub fn sum_chi_weighted(window: ZeroWindow<'_>, n: u64, k: u32, prec: Precision) -> Result<ComplexScalar> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    SumSpec::new(SumKind::ChiWeighted, n as f64, k, window)?.evaluate(prec)
}
