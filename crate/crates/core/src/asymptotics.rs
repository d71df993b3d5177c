//! Predicted main terms and unit-constant error budgets for the sums over
//! zeros.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{nearest_prime_power_distance, von_mangoldt_real, LambdaSieve};
use crate::complex::ComplexScalar;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::stieltjes_constants;
use crate::zerosums::PowerSign;

/// Position of `X` relative to the band `T/2pi < X <= T/pi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    BelowBand,
    InBand,
    AboveBand,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::BelowBand => "below-band",
            Regime::InBand => "in-band",
            Regime::AboveBand => "above-band",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `BelowBand` for `X <= T/2pi`, `InBand` for `T/2pi < X <= T/pi`,
/// `AboveBand` for `X > T/pi`.
pub fn classify_regime(x: f64, t: f64) -> Regime {
    if x <= t / TAU {
        Regime::BelowBand
    } else if x <= t / PI {
        Regime::InBand
    } else {
        Regime::AboveBand
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetTerm {
    pub name: String,
    pub value: f64,
}

impl BudgetTerm {
    pub fn new(name: &str, value: f64) -> Self {
        BudgetTerm {
            name: name.to_string(),
            value,
        }
    }
}

/// A main term with an error budget. `budget` is the sum of `terms`;
/// `shapes` lists alternative tail shapes (unconditional and under RH) when
/// the claim has both, the smaller of which is counted in `terms`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub main: ComplexScalar,
    pub budget: f64,
    pub terms: Vec<BudgetTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shapes: Vec<BudgetTerm>,
}

impl AsymptoticPrediction {
    pub fn new(main: ComplexScalar, terms: Vec<BudgetTerm>) -> Self {
        let budget = terms.iter().map(|t| t.value).sum();
        AsymptoticPrediction {
            main,
            budget,
            terms,
            shapes: Vec::new(),
        }
    }

    /// Adds the smaller of an unconditional and a conditional tail shape to
    /// the budget and records both.
    fn with_tail(mut self, unconditional: BudgetTerm, rh: BudgetTerm) -> Self {
        let pick = if unconditional.value <= rh.value {
            unconditional.clone()
        } else {
            rh.clone()
        };
        self.budget += pick.value;
        self.terms.push(pick);
        self.shapes = vec![unconditional, rh];
        self
    }

    pub fn budget_term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {v} must be positive")))
    }
}

/// Integers `n` with `T/(2pi X) < n <= T/(pi X)`.
pub fn below_band_range(x: f64, t: f64) -> (u64, u64) {
    let lo = (t / (TAU * x)).floor() + 1.0;
    let hi = (t / (PI * x)).floor();
    (lo.max(1.0) as u64, hi.max(0.0) as u64)
}

/// Integers `n` with `pi X/T <= n < 2 pi X/T`.
pub fn above_band_range(x: f64, t: f64) -> (u64, u64) {
    let lo = (PI * x / t).ceil();
    let hi = (TAU * x / t).ceil() - 1.0;
    (lo.max(1.0) as u64, hi.max(0.0) as u64)
}

/// True when no `n` in the inclusive range carries a nonzero `Lambda(n)`.
pub fn range_is_empty(range: (u64, u64), sieve: &LambdaSieve) -> Result<bool> {
    let (lo, hi) = range;
    for n in lo..=hi {
        if sieve.lambda(n)? != 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The four unit-constant terms of `E(X, T)`.
pub fn error_budget_s(x: f64, t: f64) -> AsymptoticPrediction {
    let l = t.ln();
    let rt = t.sqrt();
    let t32 = t * rt;
    AsymptoticPrediction::new(
        ComplexScalar::zero(),
        vec![
            BudgetTerm::new("t^1/2 log^2 t", rt * l * l),
            BudgetTerm::new("x^(1+1/log t) log^2 t / t^1/2", x.powf(1.0 + 1.0 / l) * l * l / rt),
            BudgetTerm::new("t^3/2 log t / (|t - 2 pi x| + t^1/2)", t32 * l / ((t - TAU * x).abs() + rt)),
            BudgetTerm::new("t^3/2 log t / (|t - pi x| + t^1/2)", t32 * l / ((t - PI * x).abs() + rt)),
        ],
    )
}

/// Main term and budget for `S(X, T) = sum_{T < gamma <= 2T} chi(rho) X^rho`.
pub fn predict_s(x: f64, t: f64, sieve: &LambdaSieve) -> Result<AsymptoticPrediction> {
    if !(x >= 1.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("X = {x} must be >= 1")));
    }
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("T = {t} must exceed 1")));
    }
    let xd = Dd::from_f64(x);
    let main = match classify_regime(x, t) {
        Regime::BelowBand => {
            let (lo, hi) = below_band_range(x, t);
            if hi >= lo {
                sieve.require(hi)?;
            }
            let mut acc = ComplexScalar::zero();
            for n in lo..=hi {
                let lam = sieve.lambda(n)?;
                if lam != 0.0 {
                    let (s, c) = Dd::sin_cos_turns(Dd::from_f64(n as f64), xd);
                    acc += ComplexScalar::new(c, s).scale_f64(lam);
                }
            }
            -acc.scale(xd)
        }
        Regime::InBand => {
            let (s, c) = Dd::sin_cos_turns(Dd::ONE, xd);
            ComplexScalar::new(c, s).scale(xd * xd.ln())
        }
        Regime::AboveBand => {
            let (lo, hi) = above_band_range(x, t);
            if hi >= lo {
                sieve.require(hi)?;
            }
            let mut acc = ComplexScalar::zero();
            for n in lo..=hi {
                let lam = sieve.lambda(n)?;
                if lam != 0.0 {
                    let (s, c) = Dd::sin_cos_turns(Dd::ONE, xd / (n as f64));
                    acc += ComplexScalar::new(c, s).scale_f64(lam / n as f64);
                }
            }
            -acc.scale(xd)
        }
    };
    let mut p = error_budget_s(x, t);
    p.main = main;
    Ok(p)
}

/// `sum_{0 < gamma <= T} X^rho` (`Plus`) or `X^{-rho}` (`Minus`), with
/// Gonek's uniform error terms.
pub fn predict_landau_gonek(x: f64, t: f64, sign: PowerSign) -> Result<AsymptoticPrediction> {
    if !(x > 1.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("X = {x} must exceed 1")));
    }
    positive("T", t)?;
    let lam = von_mangoldt_real(x);
    let dist = nearest_prime_power_distance(x)?;
    let lx = x.ln();
    let log_xt = (2.0 * x * t).ln();
    let llx = (3.0 * x).ln().ln();
    let l2t = (2.0 * t).ln();
    let (main, terms) = match sign {
        PowerSign::Plus => (
            -t / TAU * lam,
            vec![
                BudgetTerm::new("x log(2xt) loglog(3x)", x * log_xt * llx),
                BudgetTerm::new("log x min(t, x/<x>)", lx * t.min(x / dist)),
                BudgetTerm::new("log(2t) min(t, 1/log x)", l2t * t.min(1.0 / lx)),
            ],
        ),
        PowerSign::Minus => (
            -t / TAU * lam / x,
            vec![
                BudgetTerm::new("log(2xt) loglog(3x)", log_xt * llx),
                BudgetTerm::new("log x min(t/x, 1/<x>)", lx * (t / x).min(1.0 / dist)),
                BudgetTerm::new("log(2t) min(t/x, 1/(x log x))", l2t * (t / x).min(1.0 / (x * lx))),
            ],
        ),
    };
    Ok(AsymptoticPrediction::new(ComplexScalar::from_f64(main, 0.0), terms))
}

fn tail_unconditional(t: f64) -> BudgetTerm {
    BudgetTerm::new("t exp(-sqrt(log t))", t * (-t.ln().sqrt()).exp())
}

/// Three-term asymptotic for `sum_{0 < gamma <= T} zeta'(rho)`.
pub fn predict_shanks(t: f64) -> Result<AsymptoticPrediction> {
    if !(t >= 10.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("T = {t} must be >= 10")));
    }
    let c = stieltjes_constants();
    let td = Dd::from_f64(t);
    let u = td / Dd::TAU;
    let l = u.ln();
    let g0 = c.gamma0;
    let main = u * l.sqr() * 0.5 + (g0 - 1.0) * u * l + (Dd::ONE - g0 - g0.sqr() - c.gamma1 * 3.0) * u;
    let rh = BudgetTerm::new("t^1/2 log^(13/4) t", t.sqrt() * t.ln().powf(3.25));
    Ok(AsymptoticPrediction::new(ComplexScalar::new(main, Dd::ZERO), Vec::new()).with_tail(tail_unconditional(t), rh))
}

/// Leading term of `sum_{0 < gamma <= T} zeta^{(nu)}(rho)`.
pub fn predict_deriv_sum(nu: u32, t: f64) -> Result<AsymptoticPrediction> {
    if nu == 0 {
        return Err(Error::InvalidArgument("derivative order must be positive".into()));
    }
    positive("T", t)?;
    let u = Dd::from_f64(t) / Dd::TAU;
    let sign = if nu % 2 == 1 { 1.0 } else { -1.0 };
    let main = u * u.ln().powi(nu as i32 + 1) * (sign / (nu as f64 + 1.0));
    Ok(AsymptoticPrediction::new(
        ComplexScalar::new(main, Dd::ZERO),
        vec![BudgetTerm::new("t log^nu t", t * t.ln().powi(nu as i32))],
    ))
}

/// `J(sigma, r, T) = int_T^{2T} chi(sigma + it) r^{it} dt`: stationary-phase
/// main term `2 pi r^{1-sigma} e^{2 pi i r}` when `T < 2 pi r <= 2T`.
pub fn predict_j(sigma: f64, r: f64, t: f64) -> Result<AsymptoticPrediction> {
    if !(-1.0..=2.0).contains(&sigma) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} outside [-1, 2]")));
    }
    positive("r", r)?;
    positive("T", t)?;
    let tr = TAU * r;
    let main = if t < tr && tr <= 2.0 * t {
        let rd = Dd::from_f64(r);
        let (s, c) = Dd::sin_cos_turns(Dd::ONE, rd);
        ComplexScalar::new(c, s).scale(Dd::TAU * (rd.ln() * (1.0 - sigma)).exp())
    } else {
        ComplexScalar::zero()
    };
    let rt = t.sqrt();
    let a = t.powf(1.5 - sigma);
    Ok(AsymptoticPrediction::new(
        main,
        vec![
            BudgetTerm::new("t^(1/2-sigma)", t.powf(0.5 - sigma)),
            BudgetTerm::new("t^(3/2-sigma) / (|t - 2 pi r| + t^1/2)", a / ((t - tr).abs() + rt)),
            BudgetTerm::new("t^(3/2-sigma) / (|2t - 2 pi r| + t^1/2)", a / ((2.0 * t - tr).abs() + rt)),
        ],
    ))
}

/// `sum_{0 < gamma <= T} chi(rho) X^rho` for a positive integer `X`: main
/// term `-T/2pi`, budget `X log X` plus the tail shape.
pub fn predict_corollary_integer(x: u64, t: f64) -> Result<AsymptoticPrediction> {
    if x == 0 {
        return Err(Error::InvalidArgument("X must be a positive integer".into()));
    }
    positive("T", t)?;
    let xf = x as f64;
    let rh = BudgetTerm::new("t^1/2 log^2 t", t.sqrt() * t.ln().powi(2));
    Ok(AsymptoticPrediction::new(
        ComplexScalar::from_f64(-t / TAU, 0.0),
        vec![BudgetTerm::new("x log x", xf * xf.ln())],
    )
    .with_tail(tail_unconditional(t), rh))
}

/// Largest integer `X` for which the integer-`X` corollary is reported at
/// height `T` (`X <= T / (2 pi log T)`).
pub fn corollary_integer_limit(t: f64) -> u64 {
    (t / (TAU * t.ln())).floor().max(0.0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_boundaries_follow_the_inequalities() {
        let t = 1000.0;
        assert_eq!(classify_regime(t / TAU, t), Regime::BelowBand);
        assert_eq!(classify_regime(t / PI, t), Regime::InBand);
        assert_eq!(classify_regime(t / PI * (1.0 + 1e-15), t), Regime::AboveBand);
    }

    #[test]
    fn budget_is_sum_of_terms() {
        let p = predict_corollary_integer(7, 5000.0).unwrap();
        let s: f64 = p.terms.iter().map(|t| t.value).sum();
        assert_eq!(p.budget, s);
        assert_eq!(p.shapes.len(), 2);
    }
}
