//! Even-index Bernoulli numbers, generated exactly and rounded once.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::dd::Dd;

/// Largest `j` for which `B_{2j}` is tabulated.
pub const MAX_J: usize = 60;

pub struct BernoulliTable {
    /// `B_{2j} / (2j)!` for `j = 0..=MAX_J` (index 0 unused).
    pub over_factorial: Vec<Dd>,
    /// `B_{2j} / (2j (2j-1))`, the Stirling-series coefficients.
    pub stirling: Vec<Dd>,
    /// `B_{2j} / (2j)`, the digamma asymptotic coefficients.
    pub digamma: Vec<Dd>,
    /// `B_{2j}` itself.
    pub value: Vec<Dd>,
}

/// `B_0 ..= B_n` from `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
pub fn bernoulli_exact(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        // binomial C(m+1, k) built incrementally
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn bigint_to_dd(x: &BigInt) -> Dd {
    let hi = x.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return Dd::from_f64(hi);
    }
    let rest = x - BigInt::from_f64(hi).expect("finite f64 is an integer here");
    Dd::new(hi, rest.to_f64().unwrap_or(0.0))
}

pub fn rational_to_dd(r: &BigRational) -> Dd {
    let neg = r.is_negative();
    let v = bigint_to_dd(&r.numer().abs()) / bigint_to_dd(r.denom());
    if neg {
        -v
    } else {
        v
    }
}

pub fn table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_exact(2 * MAX_J);
        let mut over_factorial = vec![Dd::ZERO];
        let mut stirling = vec![Dd::ZERO];
        let mut digamma = vec![Dd::ZERO];
        let mut value = vec![Dd::ONE];
        let mut fact = BigInt::one();
        for j in 1..=MAX_J {
            let n = 2 * j;
            fact *= BigInt::from((n - 1) * n);
            let bn = &b[n];
            value.push(rational_to_dd(bn));
            over_factorial.push(rational_to_dd(&(bn / BigRational::from_integer(fact.clone()))));
            stirling.push(rational_to_dd(
                &(bn / BigRational::from_integer(BigInt::from(n * (n - 1)))),
            ));
            digamma.push(rational_to_dd(&(bn / BigRational::from_integer(BigInt::from(n)))));
        }
        BernoulliTable {
            over_factorial,
            stirling,
            digamma,
            value,
        }
    })
}
