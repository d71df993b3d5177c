use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use zx_core::arith::*;
use zx_core::special::stieltjes;

fn prime_powers_up_to(n: u64) -> Vec<u64> {
    let mut is_prime = vec![true; n as usize + 1];
    let mut out = Vec::new();
    for p in 2..=n as usize {
        if !is_prime[p] {
            continue;
        }
        for m in (p * p..=n as usize).step_by(p) {
            is_prime[m] = false;
        }
        let mut q = p as u64;
        while q <= n {
            out.push(q);
            q *= p as u64;
        }
    }
    out.sort_unstable();
    out
}

#[test]
#[allow(clippy::approx_constant)]
fn von_mangoldt_examples() {
    assert!((von_mangoldt(8) - 0.693_147_180_5).abs() < 1e-10);
    assert_eq!(von_mangoldt(6), 0.0);
    assert_eq!(von_mangoldt(7), 7f64.ln());
    assert!((von_mangoldt(7) - 1.945_910_149_1).abs() < 1e-10);
    assert_eq!(von_mangoldt(1), 0.0);
}

#[test]
fn sieve_invariants() {
    let sieve = LambdaSieve::new(1_000_000).unwrap();
    let pp = prime_powers_up_to(1_000_000);
    let mut k = 0;
    for n in 1..=1_000_000u64 {
        let v = sieve.lambda(n).unwrap();
        if k < pp.len() && pp[k] == n {
            assert!(v > 0.0);
            k += 1;
        } else {
            assert_eq!(v, 0.0, "n={n}");
        }
    }
    assert_eq!(sieve.lambda(1).unwrap(), 0.0);
    assert!((sieve.lambda(1 << 19).unwrap() - 2f64.ln()).abs() < 1e-15);
    assert!((sieve.lambda(3u64.pow(12)).unwrap() - 3f64.ln()).abs() < 1e-15);
    assert!(matches!(
        sieve.lambda(1_000_001),
        Err(zx_core::Error::SieveLimitExceeded { .. })
    ));
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn coprime_products_are_not_prime_powers() {
    let sieve = LambdaSieve::new(1_000_000).unwrap();
    for m in 2..1000u64 {
        for n in 2..1000u64 {
            if gcd(m, n) == 1 {
                assert_eq!(sieve.lambda(m * n).unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn chebyshev_sanity() {
    let sieve = LambdaSieve::new(1_000_000).unwrap();
    let x = 1e6;
    let psi: f64 = sieve.values().iter().sum();
    assert!((psi - x).abs() <= 2.0 * x.sqrt() * x.ln().powi(2));
}

#[test]
fn nearest_prime_power_examples() {
    assert_eq!(nearest_prime_power_distance(10.0).unwrap(), 1.0);
    assert_eq!(nearest_prime_power_distance(8.0).unwrap(), 1.0);
    assert_eq!(nearest_prime_power_distance(2.5).unwrap(), 0.5);
    assert!(nearest_prime_power_distance(1.0).is_err());
}

#[test]
fn nearest_prime_power_matches_enumeration() {
    let pp = prime_powers_up_to(20_100);
    let mut i = 11u64;
    while i <= 100_000 {
        let x = i as f64 / 10.0;
        let mut best = f64::INFINITY;
        for &q in &pp {
            let d = (x - q as f64).abs();
            if d > 1e-9 {
                best = best.min(d);
            }
        }
        let got = nearest_prime_power_distance(x).unwrap();
        assert!((got - best).abs() < 1e-9, "X={x}: {got} vs {best}");
        i += 1;
    }
}

#[test]
fn direct_sum_examples() {
    let sieve = LambdaSieve::new(1000).unwrap();
    let mut h = BigRational::zero();
    for n in 1..=100 {
        h += BigRational::new(BigInt::one(), BigInt::from(n));
    }
    let oracle = h.to_f64().unwrap();
    let got = partial_sum_direct(PartialSumKind::RecipSum, 100.0, 0, 0.0, &sieve).unwrap();
    assert!((got - oracle).abs() < 1e-14);
    assert!((got - 5.187_377_5).abs() < 1e-7);

    let got = partial_sum_direct(PartialSumKind::LogOverN, 2.0, 0, 0.0, &sieve).unwrap();
    assert!((got - 0.346_573_59).abs() < 1e-8);

    let (l2, l3, l5, l7) = (2f64.ln(), 3f64.ln(), 5f64.ln(), 7f64.ln());
    let hand = l2 * l2 / 2.0
        + l3 * l3 / 3.0
        + l2 * (2.0 * l2) / 4.0
        + l5 * l5 / 5.0
        + l7 * l7 / 7.0
        + l2 * (3.0 * l2) / 8.0
        + l3 * (2.0 * l3) / 9.0;
    let got = partial_sum_direct(PartialSumKind::LambdaLogOverN, 10.0, 0, 0.0, &sieve).unwrap();
    assert!((got - hand).abs() < 1e-14);

    let small = LambdaSieve::new(50).unwrap();
    assert!(partial_sum_direct(PartialSumKind::LambdaLogOverN, 100.0, 0, 0.0, &small).is_err());
    assert!(partial_sum_direct(PartialSumKind::RecipSum, 100.0, 0, 0.0, &small).is_ok());
    assert!(partial_sum_direct(PartialSumKind::PowLog, 100.0, 0, -1.5, &small).is_err());
}

#[test]
fn predicted_examples() {
    let g0 = stieltjes(0).unwrap().to_f64();
    let g1 = stieltjes(1).unwrap().to_f64();
    let e = std::f64::consts::E;
    let (m, _) = partial_sum_predicted(PartialSumKind::RecipSum, e, 0, 0.0).unwrap();
    assert!((m - (1.0 + g0)).abs() < 1e-15);
    let x: f64 = 1234.5;
    let (m, _) = partial_sum_predicted(PartialSumKind::LambdaLogOverN, x, 0, 0.0).unwrap();
    assert!((m - (0.5 * x.ln().powi(2) - (g0 * g0 + 2.0 * g1))).abs() < 1e-12);
    let (m, _) = partial_sum_predicted(PartialSumKind::PowLog, 100.0, 0, 0.0).unwrap();
    assert!((m - (100.0 * 100f64.ln() - 100.0)).abs() < 1e-12);
}

#[test]
fn residuals_are_bounded_by_the_error_shapes() {
    let sieve = LambdaSieve::new(100_000).unwrap();
    for kind in PartialSumKind::ALL {
        for &(nu, c) in &[(1u32, 0.5f64), (2, 1.0), (3, 0.0)] {
            let mut ratios = Vec::new();
            for &x in &[1e3, 1e4, 1e5] {
                let d = partial_sum_direct(kind, x, nu, c, &sieve).unwrap();
                let (m, b) = partial_sum_predicted(kind, x, nu, c).unwrap();
                ratios.push((d - m).abs() / b);
            }
            let max = ratios.iter().cloned().fold(0.0, f64::max);
            assert!(max < 20.0, "{kind} nu={nu} C={c}: {ratios:?}");
            assert!(ratios[2] <= 2.0 * ratios[0] + 0.05, "{kind} nu={nu} C={c}: {ratios:?}");
        }
    }
}

fn binomial_exact(nu: u32, alpha: BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let b = &one - &alpha;
    let mut lhs = BigRational::zero();
    let mut binom = BigRational::one();
    let mut pow = b.clone();
    for j in 0..=nu {
        let term = &binom * &pow / BigRational::from_integer(BigInt::from(j + 1));
        if j % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
        binom = binom * BigRational::from_integer(BigInt::from(nu - j)) / BigRational::from_integer(BigInt::from(j + 1));
        pow *= &b;
    }
    let mut apow = BigRational::one();
    for _ in 0..=nu {
        apow *= &alpha;
    }
    let rhs = (one - apow) / BigRational::from_integer(BigInt::from(nu + 1));
    (lhs, rhs)
}

#[test]
fn binomial_identity() {
    let (l, r) = binomial_alpha_identity(1, 0.5).unwrap();
    assert!((l - 0.375).abs() < 1e-15 && (r - 0.375).abs() < 1e-15);
    let (l, r) = binomial_alpha_identity(0, 0.3).unwrap();
    assert!((l - 0.7).abs() < 1e-15 && (r - 0.7).abs() < 1e-15);

    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let (el, er) = binomial_exact(4, quarter);
    assert_eq!(el, er);
    let (l, r) = binomial_alpha_identity(4, 0.25).unwrap();
    assert!((l - el.to_f64().unwrap()).abs() < 1e-15);
    assert!((r - er.to_f64().unwrap()).abs() < 1e-15);

    for nu in 0..=10 {
        for k in 1..=9 {
            let (l, r) = binomial_alpha_identity(nu, k as f64 / 10.0).unwrap();
            assert!((l - r).abs() <= 1e-12, "nu={nu} alpha={}", k as f64 / 10.0);
        }
    }
    assert!(binomial_alpha_identity(2, 1.0).is_err());
}
