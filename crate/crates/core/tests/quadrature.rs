use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use zx_core::asymptotics::predict_j;
use zx_core::quadrature::{afe_budget, afe_residual, contour_sum, contour_sums, integrate_j};
use zx_core::special::{theta_dd, zeta_deriv};
use zx_core::zeros::{find_zeros, ZeroTable};
use zx_core::zerosums::sum_chi_x_rho;
use zx_core::{ComplexScalar, Dd, Precision, C64};

fn table() -> &'static ZeroTable {
    static T: OnceLock<ZeroTable> = OnceLock::new();
    T.get_or_init(|| find_zeros(400.0, 1e-11).unwrap())
}

/// Stirling series for theta, enough terms for t >= 20.
fn theta_oracle(t: f64) -> f64 {
    t / 2.0 * (t / TAU).ln() - t / 2.0 - PI / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// `int_T^{2T} exp(-2 i theta(t)) r^{it} dt` by composite Simpson.
fn j_oracle(r: f64, t: f64, panels: usize) -> (f64, f64) {
    let h = t / panels as f64;
    let f = |u: f64| {
        let ph = -2.0 * theta_oracle(u) + u * r.ln();
        (ph.cos(), ph.sin())
    };
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..=panels {
        let w = if k == 0 || k == panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let (a, b) = f(t + k as f64 * h);
        re += w * a;
        im += w * b;
    }
    (re * h / 3.0, im * h / 3.0)
}

fn dist(z: ComplexScalar, re: f64, im: f64) -> f64 {
    (z.re.to_f64() - re).hypot(z.im.to_f64() - im)
}

#[test]
fn single_zero_residue() {
    let gamma = table().window(20.0, 22.0).unwrap().ordinates()[0];
    let q = contour_sum(5.0, 20.0, 22.0, table(), 1e-9).unwrap();
    let phase = (theta_dd(gamma) * -2.0 + gamma * Dd::from_f64(5.0).ln()).rem_tau().to_f64();
    let m = 5f64.sqrt();
    assert!(dist(q.value, m * phase.cos(), m * phase.sin()) < 1e-6);
    assert!(q.evaluations > 0 && q.est_error.is_finite());
}

#[test]
fn contour_matches_direct_sum() {
    let xs = [1.0, 2.0, 5.5];
    let qs = contour_sums(&xs, 50.0, 100.0, table(), 1e-9).unwrap();
    for (x, q) in xs.iter().zip(qs) {
        let d = sum_chi_x_rho(table().window(50.0, 100.0).unwrap(), *x, Precision::default()).unwrap();
        assert!((q.value - d).abs().to_f64() < 1e-6, "X={x}");
    }
    // a window starting right on a zero is nudged past it consistently
    let g = table().ordinates()[40].to_f64();
    let q = contour_sum(2.0, g, g + 30.0, table(), 1e-9).unwrap();
    let d = sum_chi_x_rho(table().window(g, g + 30.0).unwrap(), 2.0, Precision::default()).unwrap();
    assert!((q.value - d).abs().to_f64() < 1e-6);
}

#[test]
fn empty_window_gives_zero() {
    let q = contour_sum(1.0, 15.0, 20.0, table(), 1e-9).unwrap();
    assert!(q.value.abs().to_f64() < 1e-6);
}

#[test]
fn contour_rejects_bad_input() {
    assert!(contour_sum(0.5, 50.0, 60.0, table(), 1e-9).is_err());
    assert!(contour_sum(2.0, 60.0, 50.0, table(), 1e-9).is_err());
    assert!(contour_sum(2.0, 50.0, 60.0, table(), 1e-12).is_err());
    assert!(contour_sum(2.0, 350.0, 500.0, table(), 1e-9).is_err());
}

#[test]
fn j_matches_brute_force_sum() {
    let (re, im) = j_oracle(1.0, 20.0, 1_000_000);
    let q = integrate_j(0.5, 1.0, 20.0, 1e-9).unwrap();
    assert!(dist(q.value, re, im) < 1e-9 * q.value.abs().to_f64().max(1.0));
}

#[test]
fn j_error_follows_tolerance() {
    let t = 30.0;
    for f in [0.5, 1.2, 1.5, 1.9, 2.5] {
        let r = f * t / TAU;
        let (re, im) = j_oracle(r, t, 400_000);
        let mut prev = f64::INFINITY;
        for tol in [1e-3, 5e-4, 1e-6, 5e-7, 1e-9] {
            let q = integrate_j(0.5, r, t, tol).unwrap();
            let scale = q.value.abs().to_f64().max(1.0);
            let err = dist(q.value, re, im);
            assert!(err <= tol * scale, "f={f} tol={tol}: {err}");
            assert!(err <= (prev / 2.0).max(1e-11 * scale), "f={f} tol={tol}");
            prev = prev.min(err.max(1e-11 * scale));
        }
    }
}

#[test]
fn j_in_band_main_term_and_off_band_budget() {
    let t = 200.0;
    let r = 1.5 * t / TAU;
    let q = integrate_j(1.2, r, t, 1e-9).unwrap();
    let p = predict_j(1.2, r, t).unwrap();
    let main = TAU * r.powf(-0.2);
    let ph = TAU * r.fract();
    assert!(dist(p.main, main * ph.cos(), main * ph.sin()) < 1e-12);
    assert!((q.value - p.main).abs().to_f64() <= 100.0 * p.budget);
    let r = 0.5 * t / TAU;
    let q = integrate_j(1.2, r, t, 1e-9).unwrap();
    assert!(q.value.abs().to_f64() <= 100.0 * predict_j(1.2, r, t).unwrap().budget);
}

#[test]
fn j_rejects_bad_input() {
    assert!(integrate_j(2.5, 1.0, 100.0, 1e-9).is_err());
    assert!(integrate_j(0.5, 0.0, 100.0, 1e-9).is_err());
    assert!(integrate_j(0.5, 1.0, 5.0, 1e-9).is_err());
    assert!(integrate_j(0.5, 1.0, 100.0, 1e-10).is_err());
}

fn at(t: f64) -> ComplexScalar {
    ComplexScalar::new(Dd::from_f64(0.5), Dd::from_f64(t))
}

#[test]
fn afe_residual_matches_plain_double_sums() {
    let t = 300.0;
    let s = at(t);
    let n = (t / TAU).sqrt().floor() as usize;
    let l = (t / TAU).ln();
    let mut first = C64::new(0.0, 0.0);
    let mut second = C64::new(0.0, 0.0);
    for k in 1..=n {
        let lk = (k as f64).ln();
        let a = (-t * lk).sin_cos();
        first += C64::new(a.1, a.0).scale(lk * (-0.5 * lk).exp());
        let b = (t * lk).sin_cos();
        second += C64::new(b.1, b.0).scale((lk - l) * (-0.5 * lk).exp());
    }
    let chi_ph = -2.0 * theta_oracle(t);
    let chi = C64::new(chi_ph.cos(), chi_ph.sin());
    let approx = chi * second - first;
    let exact = zeta_deriv(s, 1, Precision::default()).unwrap().to_c64();
    let r = afe_residual(s, 0.5, 1, Precision::default()).unwrap().to_c64();
    assert!((r - (exact - approx)).abs() < 1e-9);
}

#[test]
fn afe_residual_examples() {
    let p = Precision::default();
    let r = afe_residual(at(1000.0), 0.5, 1, p).unwrap().abs().to_f64();
    assert!(r <= 100.0 * 1000f64.powf(-0.25) * 1000f64.ln().powi(2));
    for alpha in [0.3, 0.7] {
        let r = afe_residual(at(500.0), alpha, 2, p).unwrap().abs().to_f64();
        assert!(r <= 100.0 * afe_budget(500.0, alpha, 2), "alpha={alpha}");
    }
}

#[test]
fn afe_residual_does_not_grow() {
    let p = Precision::default();
    for nu in [1u32, 2] {
        let rs: Vec<f64> = [100.0, 300.0, 1000.0, 3000.0]
            .iter()
            .map(|&t| afe_residual(at(t), 0.5, nu, p).unwrap().abs().to_f64())
            .collect();
        for w in rs.windows(2) {
            assert!(w[1] <= 2.0 * w[0], "nu={nu}: {rs:?}");
        }
        assert!(rs[3] <= 2.0 * rs[0]);
    }
}

#[test]
fn afe_rejects_bad_input() {
    let p = Precision::default();
    assert!(afe_residual(at(5.0), 0.5, 1, p).is_err());
    assert!(afe_residual(at(100.0), 0.0, 1, p).is_err());
    assert!(afe_residual(at(100.0), 1.0, 1, p).is_err());
    assert!(afe_residual(at(100.0), 0.5, 0, p).is_err());
}
