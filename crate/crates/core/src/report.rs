//! Comparisons of direct values against predictions, calibration of the
//! unknown constants, and JSON serialization.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::LambdaSieve;
use crate::asymptotics::{
    classify_regime, corollary_integer_limit, predict_corollary_integer, predict_deriv_sum, predict_j,
    predict_landau_gonek, predict_s, predict_shanks, AsymptoticPrediction, BudgetTerm, Regime,
};
use crate::complex::ComplexScalar;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::quadrature::{afe_budget, afe_residual, integrate_j};
use crate::zeros::{ZeroTable, ZeroWindow};
use crate::zerosums::{sum_chi_x_rho, sum_x_rho, sum_zeta_deriv, PowerSign};

pub type Inputs = BTreeMap<String, f64>;

pub const DEFAULT_CAP: f64 = 100.0;
pub const MAX_SLOPE: f64 = 0.1;
pub const MIN_GRID: usize = 4;
const J_TOL: f64 = 1e-9;

pub fn inputs(pairs: &[(&str, f64)]) -> Inputs {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// The registered claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    /// `sum_{0<gamma<=T} chi(rho)` against `-T/2pi`.
    ChiSum,
    /// `sum_{0<gamma<=T} chi(rho) X^rho` for integer `X`.
    ChiSumInteger,
    /// `S(X, T)` in one of the three regimes.
    S(Regime),
    /// `sum_{0<gamma<=T} X^rho`.
    LandauGonek,
    /// `sum_{0<gamma<=T} X^{-rho}`.
    LandauGonekNegative,
    /// `sum_{0<gamma<=T} zeta'(rho)`.
    Shanks,
    /// `sum_{0<gamma<=T} zeta^{(nu)}(rho)`.
    DerivSum,
    /// `J(sigma, r, T)`.
    J,
    /// Approximate functional equation residual.
    Afe,
}

impl Claim {
    pub const ALL: [Claim; 11] = [
        Claim::ChiSum,
        Claim::ChiSumInteger,
        Claim::S(Regime::BelowBand),
        Claim::S(Regime::InBand),
        Claim::S(Regime::AboveBand),
        Claim::LandauGonek,
        Claim::LandauGonekNegative,
        Claim::Shanks,
        Claim::DerivSum,
        Claim::J,
        Claim::Afe,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::ChiSum => "cor2.2",
            Claim::ChiSumInteger => "cor2.3",
            Claim::S(Regime::BelowBand) => "thm2.1/below-band",
            Claim::S(Regime::InBand) => "thm2.1/in-band",
            Claim::S(Regime::AboveBand) => "thm2.1/above-band",
            Claim::LandauGonek => "thm1.2",
            Claim::LandauGonekNegative => "cor1.4",
            Claim::Shanks => "thm1.5",
            Claim::DerivSum => "thm1.6",
            Claim::J => "lemma4.1",
            Claim::Afe => "afe",
        }
    }

    pub fn required_inputs(self) -> &'static [&'static str] {
        match self {
            Claim::ChiSum | Claim::Shanks => &["T"],
            Claim::ChiSumInteger | Claim::S(_) | Claim::LandauGonek | Claim::LandauGonekNegative => &["X", "T"],
            Claim::DerivSum => &["nu", "T"],
            Claim::J => &["sigma", "r", "T"],
            Claim::Afe => &["t", "alpha", "nu"],
        }
    }

    /// The input the calibration trend is fitted against.
    pub fn height_key(self) -> &'static str {
        match self {
            Claim::Afe => "t",
            _ => "T",
        }
    }

    /// Zero coverage the comparison needs, if any.
    pub fn coverage(self, inputs: &Inputs) -> Option<f64> {
        let t = inputs.get("T").copied()?;
        match self {
            Claim::S(_) => Some(2.0 * t),
            Claim::J | Claim::Afe => None,
            _ => Some(t),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    #[serde(rename = "C")]
    pub c: f64,
    pub slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub claim_id: String,
    pub inputs: Inputs,
    pub direct: ComplexScalar,
    pub predicted: ComplexScalar,
    pub budget: f64,
    pub residual: f64,
    pub ratio: f64,
    /// `|arg(direct) - arg(predicted)|` reduced to `[0, pi]`, for claims
    /// whose main term is a single oscillatory monomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_error: Option<f64>,
    pub calibration: Option<Calibration>,
}

impl ComparisonReport {
    pub fn new(claim: Claim, inputs: Inputs, direct: ComplexScalar, predicted: ComplexScalar, budget: f64) -> Self {
        let residual = (direct - predicted).abs().to_f64();
        let ratio = if budget > 0.0 {
            residual / budget
        } else if residual == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        ComparisonReport {
            claim_id: claim.id().to_string(),
            inputs,
            direct,
            predicted,
            budget,
            residual,
            ratio,
            phase_error: None,
            calibration: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub inputs: Inputs,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFit {
    pub claim_id: String,
    pub grid: Vec<GridPoint>,
    #[serde(rename = "C")]
    pub c: f64,
    pub trend_slope: f64,
    pub cap: f64,
    pub cap_overridden: bool,
    pub passes: bool,
}

/// A calibration together with the per-point comparisons it was fitted on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRun {
    pub fit: CalibrationFit,
    pub reports: Vec<ComparisonReport>,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// What a comparison needs besides its inputs.
pub struct ReportContext<'a> {
    pub table: Option<&'a ZeroTable>,
    pub sieve: LambdaSieve,
    pub precision: Precision,
    pub cap: f64,
}

impl<'a> ReportContext<'a> {
    pub fn new(table: Option<&'a ZeroTable>, sieve_limit: u64, precision: Precision) -> Result<Self> {
        Ok(ReportContext {
            table,
            sieve: LambdaSieve::new(sieve_limit)?,
            precision,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    fn table(&self, hi: f64) -> Result<&'a ZeroTable> {
        self.table.ok_or(Error::OutOfCoverage { hi, t_max: 0.0 })
    }
}

fn get(inputs: &Inputs, key: &str) -> Result<f64> {
    inputs.get(key).copied().ok_or_else(|| Error::MissingInput(key.to_string()))
}

fn integer(inputs: &Inputs, key: &str) -> Result<u64> {
    let v = get(inputs, key)?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) {
        Ok(v as u64)
    } else {
        Err(Error::InvalidArgument(format!("{key} = {v} must be a nonnegative integer")))
    }
}

fn wrap_phase(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    r.min(TAU - r)
}

fn validate(claim: Claim, inputs: &Inputs) -> Result<()> {
    for key in inputs.keys() {
        if !claim.required_inputs().contains(&key.as_str()) {
            return Err(Error::InvalidArgument(format!("{claim} does not take input `{key}`")));
        }
    }
    for key in claim.required_inputs() {
        get(inputs, key)?;
    }
    match claim {
        Claim::ChiSumInteger => {
            let t = get(inputs, "T")?;
            let x = integer(inputs, "X")?;
            if x == 0 || x > corollary_integer_limit(t) {
                return Err(Error::InvalidArgument(format!(
                    "X = {x} outside 1..={} at T = {t}",
                    corollary_integer_limit(t)
                )));
            }
        }
        Claim::S(regime) => {
            let (x, t) = (get(inputs, "X")?, get(inputs, "T")?);
            let actual = classify_regime(x, t);
            if actual != regime {
                return Err(Error::InvalidArgument(format!("(X, T) = ({x}, {t}) is {actual}, not {regime}")));
            }
        }
        _ => {}
    }
    Ok(())
}

fn sign_of(claim: Claim) -> PowerSign {
    if claim == Claim::LandauGonekNegative {
        PowerSign::Minus
    } else {
        PowerSign::Plus
    }
}

/// The predicted main term and unit-constant budget for one claim.
pub fn predict(sieve: &LambdaSieve, claim: Claim, inputs: &Inputs) -> Result<AsymptoticPrediction> {
    validate(claim, inputs)?;
    match claim {
        Claim::ChiSum => {
            let p = predict_corollary_integer(1, get(inputs, "T")?)?;
            // zeros in range are verified on the line, so the conditional shape applies
            let rh = p.shapes[1].clone();
            let mut out = AsymptoticPrediction::new(p.main, vec![rh]);
            out.shapes = p.shapes;
            Ok(out)
        }
        Claim::ChiSumInteger => predict_corollary_integer(integer(inputs, "X")?, get(inputs, "T")?),
        Claim::S(_) => predict_s(get(inputs, "X")?, get(inputs, "T")?, sieve),
        Claim::LandauGonek | Claim::LandauGonekNegative => {
            predict_landau_gonek(get(inputs, "X")?, get(inputs, "T")?, sign_of(claim))
        }
        Claim::Shanks => predict_shanks(get(inputs, "T")?),
        Claim::DerivSum => predict_deriv_sum(integer(inputs, "nu")? as u32, get(inputs, "T")?),
        Claim::J => predict_j(get(inputs, "sigma")?, get(inputs, "r")?, get(inputs, "T")?),
        Claim::Afe => {
            let (t, alpha) = (get(inputs, "t")?, get(inputs, "alpha")?);
            let nu = integer(inputs, "nu")? as u32;
            Ok(AsymptoticPrediction::new(
                ComplexScalar::zero(),
                vec![BudgetTerm::new("t^(-alpha/2) log^(nu+1) t + t^(-(1-alpha)/2) log^(nu+1) t", afe_budget(t, alpha, nu))],
            ))
        }
    }
}

fn direct(ctx: &ReportContext<'_>, claim: Claim, inputs: &Inputs) -> Result<ComplexScalar> {
    let prec = ctx.precision;
    let below = |t: f64| -> Result<ZeroWindow<'_>> { ctx.table(t)?.window(0.0, t) };
    match claim {
        Claim::ChiSum => sum_chi_x_rho(below(get(inputs, "T")?)?, 1.0, prec),
        Claim::ChiSumInteger => sum_chi_x_rho(below(get(inputs, "T")?)?, get(inputs, "X")?, prec),
        Claim::S(_) => {
            let t = get(inputs, "T")?;
            sum_chi_x_rho(ctx.table(2.0 * t)?.window(t, 2.0 * t)?, get(inputs, "X")?, prec)
        }
        Claim::LandauGonek | Claim::LandauGonekNegative => {
            sum_x_rho(below(get(inputs, "T")?)?, get(inputs, "X")?, sign_of(claim), prec)
        }
        Claim::Shanks => sum_zeta_deriv(below(get(inputs, "T")?)?, 1, prec),
        Claim::DerivSum => sum_zeta_deriv(below(get(inputs, "T")?)?, integer(inputs, "nu")? as u32, prec),
        Claim::J => Ok(integrate_j(get(inputs, "sigma")?, get(inputs, "r")?, get(inputs, "T")?, J_TOL)?.value),
        Claim::Afe => {
            let s = ComplexScalar::new(Dd::from_f64(0.5), Dd::from_f64(get(inputs, "t")?));
            afe_residual(s, get(inputs, "alpha")?, integer(inputs, "nu")? as u32, prec)
        }
    }
}

/// Evaluates the direct value and the prediction for one claim.
pub fn compare(ctx: &ReportContext<'_>, claim_id: &str, inputs: &Inputs) -> Result<ComparisonReport> {
    let claim: Claim = claim_id.parse()?;
    let p = predict(&ctx.sieve, claim, inputs)?;
    let d = direct(ctx, claim, inputs)?;
    let mut r = ComparisonReport::new(claim, inputs.clone(), d, p.main, p.budget);
    if claim == Claim::S(Regime::InBand) {
        let (a, b) = (d.to_c64(), p.main.to_c64());
        r.phase_error = Some(wrap_phase(a.im.atan2(a.re) - b.im.atan2(b.re)));
    }
    Ok(r)
}

/// `C = max ratio` and the least-squares slope of `log ratio` against
/// `log height`.
pub fn fit(claim: Claim, grid: Vec<GridPoint>, cap: f64) -> Result<CalibrationFit> {
    if grid.len() < MIN_GRID {
        return Err(Error::InsufficientGrid {
            needed: MIN_GRID,
            got: grid.len(),
        });
    }
    let key = claim.height_key();
    let xs: Vec<f64> = grid
        .iter()
        .map(|p| get(&p.inputs, key).map(f64::ln))
        .collect::<Result<_>>()?;
    let ys: Vec<f64> = grid.iter().map(|p| p.ratio.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let c = grid.iter().map(|p| p.ratio).fold(0.0, f64::max);
    Ok(CalibrationFit {
        claim_id: claim.id().to_string(),
        grid,
        c,
        trend_slope: slope,
        cap,
        cap_overridden: cap != DEFAULT_CAP,
        passes: slope <= MAX_SLOPE && c <= cap,
    })
}

/// Runs [`compare`] on every grid point (concurrently) and fits the
/// calibration constant.
pub fn calibrate(ctx: &ReportContext<'_>, claim_id: &str, grid: &[Inputs]) -> Result<CalibrationRun> {
    let claim: Claim = claim_id.parse()?;
    if grid.len() < MIN_GRID {
        return Err(Error::InsufficientGrid {
            needed: MIN_GRID,
            got: grid.len(),
        });
    }
    let mut reports: Vec<ComparisonReport> = grid
        .par_iter()
        .map(|inp| compare(ctx, claim_id, inp))
        .collect::<Result<_>>()?;
    let points = reports
        .iter()
        .map(|r| GridPoint {
            inputs: r.inputs.clone(),
            ratio: r.ratio,
        })
        .collect();
    let fit = fit(claim, points, ctx.cap)?;
    let cal = Calibration {
        c: fit.c,
        slope: fit.trend_slope,
    };
    for r in &mut reports {
        r.calibration = Some(cal);
    }
    Ok(CalibrationRun { fit, reports })
}

/// Expands `KEY=start:stop:step` (inclusive) or `KEY=v1,v2,...` over the
/// fixed `base` inputs.
pub fn parse_grid(spec: &str, base: &Inputs) -> Result<Vec<Inputs>> {
    let bad = || Error::InvalidArgument(format!("malformed grid `{spec}`"));
    let (key, values) = spec.split_once('=').ok_or_else(bad)?;
    let key = key.trim();
    if key.is_empty() {
        return Err(bad());
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let values: Vec<f64> = if values.contains(':') {
        let parts: Vec<&str> = values.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(h > 0.0 && b >= a) {
            return Err(bad());
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        (0..=n).map(|k| a + k as f64 * h).collect()
    } else {
        values.split(',').map(num).collect::<Result<_>>()?
    };
    Ok(values
        .into_iter()
        .map(|v| {
            let mut m = base.clone();
            m.insert(key.to_string(), v);
            m
        })
        .collect())
}
