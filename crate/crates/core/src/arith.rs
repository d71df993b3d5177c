//! Von Mangoldt function, prime-power distances and the partial sums used by
//! the predictors.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special::stieltjes;
use crate::summation::CompensatedSum;

pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// Tolerance for treating a real argument as an integer.
pub const INTEGER_TOL: f64 = 1e-9;

/// Precomputed `Lambda(n)` for `1 <= n <= limit`.
#[derive(Clone, Debug)]
pub struct LambdaSieve {
    limit: u64,
    // values[n] = Lambda(n); values[0] unused
    values: Vec<f64>,
}

impl LambdaSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument("sieve limit must be positive".into()));
        }
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut values = vec![0.0f64; n + 1];
        for p in 2..=n {
            if composite[p] {
                continue;
            }
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
            let lp = (p as f64).ln();
            let mut q = p;
            loop {
                values[q] = lp;
                match q.checked_mul(p) {
                    Some(next) if next <= n => q = next,
                    _ => break,
                }
            }
        }
        Ok(LambdaSieve { limit, values })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `Lambda(n)` for `1 <= n <= limit`.
    pub fn lambda(&self, n: u64) -> Result<f64> {
        if n > self.limit {
            return Err(Error::SieveLimitExceeded {
                needed: n,
                limit: self.limit,
            });
        }
        Ok(self.values[n as usize])
    }

    /// Fails unless the sieve covers `n`.
    pub fn require(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::SieveLimitExceeded {
                needed: n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// The slice `Lambda(0..=limit)` (index 0 holds 0).
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Smallest prime factor of `n >= 2` by trial division.
fn smallest_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// The prime `p` if `n = p^k` with `k >= 1`, else `None`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let p = smallest_factor(n);
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

/// `Lambda(n)`: `log p` if `n` is a power of the prime `p`, else 0.
pub fn von_mangoldt(n: u64) -> f64 {
    prime_power_base(n).map_or(0.0, |p| (p as f64).ln())
}

/// `Lambda(X)` for real `X`: nonzero only within [`INTEGER_TOL`] of an
/// integer prime power.
pub fn von_mangoldt_real(x: f64) -> f64 {
    let k = x.round();
    if k >= 2.0 && (x - k).abs() <= INTEGER_TOL {
        von_mangoldt(k as u64)
    } else {
        0.0
    }
}

/// `<X>`: distance from `X` to the nearest prime power other than `X`
/// itself (an integer within [`INTEGER_TOL`] of `X` is excluded).
pub fn nearest_prime_power_distance(x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain {
            op: "nearest_prime_power_distance",
            reason: format!("requires X > 1, got {x}"),
        });
    }
    let excluded = {
        let k = x.round();
        ((x - k).abs() <= INTEGER_TOL).then_some(k as u64)
    };
    let usable = |q: u64| Some(q) != excluded && prime_power_base(q).is_some();
    let mut best = f64::INFINITY;
    // downward
    let mut q = x.floor() as u64;
    while q >= 2 {
        if usable(q) {
            best = x - q as f64;
            break;
        }
        q -= 1;
    }
    // upward
    let mut q = (x.ceil() as u64).max(2);
    loop {
        let d = q as f64 - x;
        if d >= best {
            break;
        }
        if usable(q) {
            best = best.min(d.abs());
            break;
        }
        q += 1;
    }
    Ok(best)
}

/// The nine partial sums `sum_{n <= x} a_n` covered by the expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartialSumKind {
    /// `1/n`
    RecipSum,
    /// `log n / n`
    LogOverN,
    /// `Lambda(n) log n / n`
    LambdaLogOverN,
    /// `n^C log n`
    PowLog,
    /// `n^C Lambda(n) log n`
    PowLambdaLog,
    /// `Lambda(n) (log n)^nu / n`
    LambdaLogNuOverN,
    /// `Lambda(n) n^C (log n)^nu`
    PowLambdaLogNu,
    /// `(log n)^nu / n`
    LogNuOverN,
    /// `n^C (log n)^nu`
    PowLogNu,
}

impl PartialSumKind {
    pub const ALL: [PartialSumKind; 9] = [
        PartialSumKind::RecipSum,
        PartialSumKind::LogOverN,
        PartialSumKind::LambdaLogOverN,
        PartialSumKind::PowLog,
        PartialSumKind::PowLambdaLog,
        PartialSumKind::LambdaLogNuOverN,
        PartialSumKind::PowLambdaLogNu,
        PartialSumKind::LogNuOverN,
        PartialSumKind::PowLogNu,
    ];

    pub fn uses_lambda(self) -> bool {
        matches!(
            self,
            PartialSumKind::LambdaLogOverN
                | PartialSumKind::PowLambdaLog
                | PartialSumKind::LambdaLogNuOverN
                | PartialSumKind::PowLambdaLogNu
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            PartialSumKind::RecipSum => "recip-sum",
            PartialSumKind::LogOverN => "log-over-n",
            PartialSumKind::LambdaLogOverN => "lambda-log-over-n",
            PartialSumKind::PowLog => "pow-log",
            PartialSumKind::PowLambdaLog => "pow-lambda-log",
            PartialSumKind::LambdaLogNuOverN => "lambda-log-nu-over-n",
            PartialSumKind::PowLambdaLogNu => "pow-lambda-log-nu",
            PartialSumKind::LogNuOverN => "log-nu-over-n",
            PartialSumKind::PowLogNu => "pow-log-nu",
        }
    }

    /// The summand `a_n` given `Lambda(n)`.
    fn term(self, n: u64, lambda: f64, nu: u32, c: f64) -> f64 {
        let nf = n as f64;
        let l = nf.ln();
        match self {
            PartialSumKind::RecipSum => 1.0 / nf,
            PartialSumKind::LogOverN => l / nf,
            PartialSumKind::LambdaLogOverN => lambda * l / nf,
            PartialSumKind::PowLog => nf.powf(c) * l,
            PartialSumKind::PowLambdaLog => nf.powf(c) * lambda * l,
            PartialSumKind::LambdaLogNuOverN => lambda * l.powi(nu as i32) / nf,
            PartialSumKind::PowLambdaLogNu => lambda * nf.powf(c) * l.powi(nu as i32),
            PartialSumKind::LogNuOverN => l.powi(nu as i32) / nf,
            PartialSumKind::PowLogNu => nf.powf(c) * l.powi(nu as i32),
        }
    }
}

impl fmt::Display for PartialSumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartialSumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartialSumKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown partial-sum kind `{s}`")))
    }
}

fn check_params(kind: PartialSumKind, x: f64, c: f64) -> Result<()> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::Domain {
            op: "partial_sum",
            reason: format!("requires x >= 2, got {x}"),
        });
    }
    let uses_c = matches!(
        kind,
        PartialSumKind::PowLog | PartialSumKind::PowLambdaLog | PartialSumKind::PowLambdaLogNu | PartialSumKind::PowLogNu
    );
    if uses_c && !(c > -1.0) {
        return Err(Error::Domain {
            op: "partial_sum",
            reason: format!("requires C > -1, got {c}"),
        });
    }
    Ok(())
}

/// `sum_{n <= x} a_n` accumulated with compensated summation.
pub fn partial_sum_direct(kind: PartialSumKind, x: f64, nu: u32, c: f64, sieve: &LambdaSieve) -> Result<f64> {
    check_params(kind, x, c)?;
    let n_max = x.floor() as u64;
    if kind.uses_lambda() {
        sieve.require(n_max)?;
    }
    let lam = sieve.values();
    let mut acc = CompensatedSum::new();
    for n in 1..=n_max {
        let lambda = if kind.uses_lambda() { lam[n as usize] } else { 0.0 };
        if kind.uses_lambda() && lambda == 0.0 {
            continue;
        }
        acc.add(kind.term(n, lambda, nu, c));
    }
    Ok(acc.value())
}

/// Main term of the expansion of `sum_{n <= x} a_n` and the magnitude of
/// its error term with unit constant.
pub fn partial_sum_predicted(kind: PartialSumKind, x: f64, nu: u32, c: f64) -> Result<(f64, f64)> {
    check_params(kind, x, c)?;
    let g0 = stieltjes(0)?.to_f64();
    let g1 = stieltjes(1)?.to_f64();
    let l = x.ln();
    let c1 = c + 1.0;
    let xc1 = x.powf(c1);
    let nu_f = nu as f64;
    let ln_pow = |k: f64| l.powf(k);
    let decay = (-l.sqrt()).exp();
    Ok(match kind {
        PartialSumKind::RecipSum => (l + g0, 1.0 / x),
        PartialSumKind::LogOverN => (0.5 * l * l + g1, l / x),
        PartialSumKind::LambdaLogOverN => (0.5 * l * l - (g0 * g0 + 2.0 * g1), decay),
        PartialSumKind::PowLog => (xc1 * l / c1 - xc1 / (c1 * c1), x.powf(c) * l),
        PartialSumKind::PowLambdaLog => (xc1 * l / c1 - xc1 / (c1 * c1), xc1 * decay),
        PartialSumKind::LambdaLogNuOverN => (ln_pow(nu_f + 1.0) / (nu_f + 1.0), ln_pow(nu_f)),
        PartialSumKind::PowLambdaLogNu => (xc1 * ln_pow(nu_f) / c1, xc1 * ln_pow(nu_f - 1.0)),
        PartialSumKind::LogNuOverN => (ln_pow(nu_f + 1.0) / (nu_f + 1.0), ln_pow(nu_f)),
        PartialSumKind::PowLogNu => (xc1 * ln_pow(nu_f) / c1, xc1 * ln_pow(nu_f - 1.0)),
    })
}

/// Both sides of
/// `sum_{j=0}^{nu} (-1)^j C(nu,j) (1-a)^{j+1}/(j+1) = (1 - a^{nu+1})/(nu+1)`.
pub fn binomial_alpha_identity(nu: u32, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            op: "binomial_alpha_identity",
            reason: format!("requires 0 < alpha < 1, got {alpha}"),
        });
    }
    let b = 1.0 - alpha;
    let mut binom = 1.0f64;
    let mut pow = b;
    let mut acc = CompensatedSum::new();
    for j in 0..=nu {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * binom * pow / (j as f64 + 1.0));
        binom = binom * (nu - j) as f64 / (j as f64 + 1.0);
        pow *= b;
    }
    let rhs = (1.0 - alpha.powi(nu as i32 + 1)) / (nu as f64 + 1.0);
    Ok((acc.value(), rhs))
}
