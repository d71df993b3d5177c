//! Euler–Maclaurin evaluation of `zeta(s)` and its derivatives.
//!
//! `zeta(s + e) = sum_{n<N} n^{-s-e} + N^{1-s-e}/(s+e-1) + N^{-s-e}/2
//!              + sum_j B_{2j}/(2j)! (s+e)_{2j-1} N^{-s-e-2j+1}`
//!
//! is carried as a truncated power series ("jet") in `e`, so one pass over
//! the main sum yields every derivative up to the requested order.

use std::sync::{Arc, RwLock};

use crate::complex::Complex;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::real::Real;

use super::bernoulli;

/// Highest derivative order supported.
pub const MAX_ORDER: usize = 6;
const JET: usize = MAX_ORDER + 1;

/// Number of main-sum terms: `max(20, ceil(2|t|/pi))`.
pub fn em_terms(t: f64) -> usize {
    ((2.0 * t.abs() / std::f64::consts::PI).ceil() as usize).max(20)
}

/// Shared table of `ln n` (double-double) and `n^{-1/2}`, grown on demand.
struct LogTable {
    ln: Vec<Dd>,
    turns: Vec<Dd>,
    inv_sqrt: Vec<Dd>,
    // smallest prime factor
    spf: Vec<u32>,
}

fn log_table(n_max: usize) -> Arc<LogTable> {
    static TABLE: RwLock<Option<Arc<LogTable>>> = RwLock::new(None);
    if let Some(t) = TABLE.read().expect("log table lock").as_ref() {
        if t.ln.len() > n_max {
            return Arc::clone(t);
        }
    }
    let mut guard = TABLE.write().expect("log table lock");
    if let Some(t) = guard.as_ref() {
        if t.ln.len() > n_max {
            return Arc::clone(t);
        }
    }
    let len = (n_max + 1).next_power_of_two().max(1024);
    let mut ln = Vec::with_capacity(len);
    let mut turns = Vec::with_capacity(len);
    let mut inv_sqrt = Vec::with_capacity(len);
    ln.push(Dd::ZERO);
    turns.push(Dd::ZERO);
    inv_sqrt.push(Dd::ZERO);
    let inv_tau = Dd::TAU.recip();
    for n in 1..len {
        let x = Dd::from_f64(n as f64);
        let l = x.ln();
        ln.push(l);
        turns.push(l * inv_tau);
        inv_sqrt.push(x.sqrt().recip());
    }
    let mut spf = vec![0u32; len];
    for i in 2..len {
        if spf[i] == 0 {
            let mut j = i;
            while j < len {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let t = Arc::new(LogTable {
        ln,
        turns,
        inv_sqrt,
        spf,
    });
    *guard = Some(Arc::clone(&t));
    t
}

/// `ln n` to double-double accuracy.
pub fn ln_int(n: usize) -> Dd {
    log_table(n).ln[n]
}

/// `ln n / 2 pi` to double-double accuracy.
pub fn ln_turns(n: usize) -> Dd {
    log_table(n).turns[n]
}

/// Calls `f(n, ln n, ln n / 2 pi, n^{-1/2})` for `n` in `1..=n_max`.
pub fn for_each_log(n_max: usize, mut f: impl FnMut(usize, Dd, Dd, Dd)) {
    let tab = log_table(n_max);
    for n in 1..=n_max {
        f(n, tab.ln[n], tab.turns[n], tab.inv_sqrt[n]);
    }
}

/// Truncated power series in the shift `e`, `sum_k c[k] e^k`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet<R: Real> {
    pub c: [Complex<R>; JET],
    pub len: usize,
}

impl<R: Real> Jet<R> {
    pub fn zero(len: usize) -> Self {
        Jet {
            c: [Complex::zero(); JET],
            len,
        }
    }

    pub fn constant(z: Complex<R>, len: usize) -> Self {
        let mut j = Jet::zero(len);
        j.c[0] = z;
        j
    }

    pub fn mul(&self, o: &Jet<R>) -> Jet<R> {
        let mut r = Jet::zero(self.len);
        for i in 0..self.len {
            for k in 0..self.len - i {
                r.c[i + k] += self.c[i] * o.c[k];
            }
        }
        r
    }

    /// Multiply by `(a + e)`.
    pub fn mul_linear(&self, a: Complex<R>) -> Jet<R> {
        let mut r = Jet::zero(self.len);
        for k in 0..self.len {
            r.c[k] = self.c[k] * a;
            if k > 0 {
                r.c[k] += self.c[k - 1];
            }
        }
        r
    }

    pub fn add_scaled(&mut self, o: &Jet<R>, k: R) {
        for i in 0..self.len {
            self.c[i] += o.c[i] * k;
        }
    }

    pub fn norm(&self) -> f64 {
        self.c[..self.len]
            .iter()
            .map(|z| z.abs().to_f64())
            .fold(0.0, f64::max)
    }
}

/// `n^{-s-e}` as a jet: `n^{-s} sum_k (-ln n)^k e^k / k!`.
fn power_jet<R: Real>(s: Complex<R>, ln_n: Dd, len: usize) -> Jet<R> {
    let l = R::from_dd(ln_n);
    let modulus = (-(s.re * l)).exp();
    let (sn, cs) = R::sin_cos_product(s.im, ln_n);
    let base = Complex::new(cs * modulus, -(sn * modulus));
    let mut j = Jet::zero(len);
    let mut f = R::one();
    for k in 0..len {
        j.c[k] = base * f;
        f = f * (-l) / (k as f64 + 1.0);
    }
    j
}

/// Taylor coefficients `c_k = zeta^{(k)}(s) / k!` for `k = 0..=order`.
pub fn zeta_taylor<R: Real>(s: Complex<R>, order: usize, prec: Precision) -> Result<Vec<Complex<R>>> {
    zeta_taylor_with_terms(s, order, em_terms(s.im.to_f64()), prec)
}

/// As [`zeta_taylor`] with an explicit main-sum length `n_terms >= 20`.
pub fn zeta_taylor_with_terms<R: Real>(
    s: Complex<R>,
    order: usize,
    n_terms: usize,
    prec: Precision,
) -> Result<Vec<Complex<R>>> {
    if order > MAX_ORDER {
        return Err(Error::Domain {
            op: "zeta_deriv",
            reason: format!("order {order} exceeds {MAX_ORDER}"),
        });
    }
    let sm1 = s - R::one();
    if sm1.abs().to_f64() < 1e-30 {
        return Err(Error::PoleAtOne);
    }
    let len = order + 1;
    let eps = prec.eps_for::<R>();
    let n_terms = n_terms.max(20);
    let tab = log_table(n_terms);

    // main sum; n^{-s} is completely multiplicative, so only primes need
    // a transcendental evaluation
    let mut total = Jet::<R>::zero(len);
    let on_line = s.re.to_f64() == 0.5 && (s.re - R::from_f64(0.5)).to_f64() == 0.0;
    let mut pw: Vec<Complex<R>> = Vec::with_capacity(n_terms);
    pw.push(Complex::zero());
    let mut block = Jet::<R>::zero(len);
    for n in 1..n_terms {
        let p = tab.spf[n] as usize;
        let base = if n == 1 {
            Complex::one()
        } else if p == n {
            let modulus = if on_line {
                R::from_dd(tab.inv_sqrt[n])
            } else {
                (-(s.re * R::from_dd(tab.ln[n]))).exp()
            };
            let (sn, cs) = R::sin_cos_turns(s.im, tab.turns[n]);
            Complex::new(cs * modulus, -(sn * modulus))
        } else {
            pw[p] * pw[n / p]
        };
        pw.push(base);
        block.c[0] += base;
        if len > 1 {
            let ml = -R::from_dd(tab.ln[n]);
            let mut f = ml;
            for k in 1..len {
                block.c[k] += base * f;
                f = f * ml / (k as f64 + 1.0);
            }
        }
        if n % 64 == 0 {
            total.add_scaled(&block, R::one());
            block = Jet::zero(len);
        }
    }
    total.add_scaled(&block, R::one());

    // tail at N
    let big_n = n_terms;
    let ln_big = tab.ln[big_n];
    let n_jet = power_jet(s, ln_big, len);
    let nf = big_n as f64;

    // N / (s - 1 + e)
    let inv = sm1.recip();
    let mut inv_jet = Jet::<R>::zero(len);
    let mut p = inv;
    for k in 0..len {
        inv_jet.c[k] = p * R::from_f64(nf);
        p = -(p * inv);
    }
    let mut tail = inv_jet;
    tail.c[0] += Complex::real(R::from_f64(0.5));

    // Bernoulli corrections: sum_j B_{2j}/(2j)! (s+e)_{2j-1} N^{1-2j}
    let bern = bernoulli::table();
    let mut poch = Jet::constant(Complex::one(), len).mul_linear(s);
    let inv_n = R::one() / R::from_f64(nf);
    let inv_n2 = inv_n * inv_n;
    let mut npow = inv_n;
    let scale = (total.c[0].abs().to_f64()).max(1e-300);
    let mut last = f64::INFINITY;
    for j in 1..=bernoulli::MAX_J {
        let coef = R::from_dd(bern.over_factorial[j]) * npow;
        let mut term = poch;
        for k in 0..len {
            term.c[k] = term.c[k] * coef;
        }
        let mag = term.norm();
        if mag > last {
            break;
        }
        tail.add_scaled(&term, R::one());
        if mag * n_jet.c[0].abs().to_f64() < eps * scale * 0.01 {
            break;
        }
        last = mag;
        let a = R::from_f64(2.0 * j as f64 - 1.0);
        let b = R::from_f64(2.0 * j as f64);
        poch = poch.mul_linear(s + a).mul_linear(s + b);
        npow *= inv_n2;
    }
    let tail = tail.mul(&n_jet);
    total.add_scaled(&tail, R::one());
    Ok(total.c[..len].to_vec())
}

/// `zeta(s)` on either scalar path.
pub fn zeta_generic<R: Real>(s: Complex<R>, prec: Precision) -> Result<Complex<R>> {
    Ok(zeta_taylor(s, 0, prec)?[0])
}

/// `zeta^{(nu)}(s)` on either scalar path.
pub fn zeta_deriv_generic<R: Real>(s: Complex<R>, nu: usize, prec: Precision) -> Result<Complex<R>> {
    let c = zeta_taylor(s, nu, prec)?;
    let mut fact = 1.0;
    for k in 2..=nu {
        fact *= k as f64;
    }
    Ok(c[nu] * R::from_f64(fact))
}

/// `[zeta(s), zeta'(s), ..., zeta^{(order)}(s)]`.
pub fn zeta_derivs<R: Real>(s: Complex<R>, order: usize, prec: Precision) -> Result<Vec<Complex<R>>> {
    let mut c = zeta_taylor(s, order, prec)?;
    let mut fact = 1.0;
    for (k, v) in c.iter_mut().enumerate() {
        if k > 1 {
            fact *= k as f64;
        }
        *v = *v * R::from_f64(fact);
    }
    Ok(c)
}
