//! Stieltjes constants `gamma_n`, the Laurent coefficients of `zeta` at 1:
//! `zeta(s) = 1/(s-1) + sum_n (-1)^n gamma_n (s-1)^n / n!`.
//!
//! Computed from `gamma_n = lim (sum_{k<=N} (ln k)^n/k - (ln N)^{n+1}/(n+1))`
//! with the Euler–Maclaurin correction at a finite `N`.

use std::sync::OnceLock;

use crate::dd::Dd;
use crate::error::{Error, Result};

use super::bernoulli;
use super::zeta::ln_int;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StieltjesConstants {
    pub gamma0: Dd,
    pub gamma1: Dd,
    pub gamma2: Dd,
}

const CUTOFF: usize = 200;

fn compute(n: usize) -> Dd {
    let big = Dd::from_f64(CUTOFF as f64);
    let l = ln_int(CUTOFF);
    let mut s = Dd::ZERO;
    for k in 2..=CUTOFF {
        s += ln_int(k).powi(n as i32) / (k as f64);
    }
    let f_n = l.powi(n as i32) / big;
    s -= l.powi(n as i32 + 1) / ((n + 1) as f64);
    s -= f_n * 0.5;

    // f^{(m)}(x) = x^{-1-m} P_m(ln x), P_{m+1} = -(m+1) P_m + P_m'
    let mut poly = vec![Dd::ZERO; n + 1];
    poly[n] = Dd::ONE;
    let eval = |p: &[Dd]| p.iter().rev().fold(Dd::ZERO, |acc, &c| acc * l + c);
    let bern = bernoulli::table();
    let mut m = 0usize;
    let inv_big = big.recip();
    let mut xpow = inv_big; // x^{-1-m}
    for j in 1..=bernoulli::MAX_J {
        while m < 2 * j - 1 {
            let mut next = vec![Dd::ZERO; n + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] -= *c * ((m + 1) as f64);
                if i > 0 {
                    next[i - 1] += *c * (i as f64);
                }
            }
            poly = next;
            m += 1;
            xpow *= inv_big;
        }
        let term = bern.over_factorial[j] * eval(&poly) * xpow;
        s -= term;
        if term.abs().to_f64() < 1e-34 {
            break;
        }
    }
    if n == 0 {
        s += Dd::ONE;
    }
    s
}

/// `gamma_0, gamma_1, gamma_2`, computed once per process.
pub fn stieltjes_constants() -> &'static StieltjesConstants {
    static CONSTS: OnceLock<StieltjesConstants> = OnceLock::new();
    CONSTS.get_or_init(|| StieltjesConstants {
        gamma0: compute(0),
        gamma1: compute(1),
        gamma2: compute(2),
    })
}

/// `gamma_n` for `n` in `0..=2`.
pub fn stieltjes(n: u32) -> Result<Dd> {
    let c = stieltjes_constants();
    match n {
        0 => Ok(c.gamma0),
        1 => Ok(c.gamma1),
        2 => Ok(c.gamma2),
        _ => Err(Error::UnsupportedIndex(n)),
    }
}
