//! Adaptive Gauss–Kronrod quadrature for the oscillatory integral
//! `J(sigma, r, T)`, the rectangle contour around a window of zeros, and the
//! residual of the approximate functional equation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::complex::{Complex, ComplexScalar, C64};
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::real::Real;
use crate::special::chi::{chi_generic, ell};
use crate::special::zeta::{ln_int, zeta_taylor, MAX_ORDER};
use crate::summation::pairwise_sum;
use crate::zeros::ZeroTable;

/// Minimum distance kept between a horizontal contour edge and any zero.
pub const CONTOUR_CLEARANCE: f64 = 0.05;
pub const MIN_TOL: f64 = 1e-9;
const MAX_SEGMENTS: usize = 200_000;
const SPLIT_BATCH: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: ComplexScalar,
    pub est_error: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 21-point Kronrod and embedded 10-point Gauss estimates of
/// `int_a^b f` for a vector-valued `f`, with the QUADPACK error heuristic
/// (largest over the components).
pub fn gauss_kronrod_21<F>(f: &F, a: f64, b: f64) -> Result<(Vec<C64>, f64)>
where
    F: Fn(f64) -> Result<Vec<C64>>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut vals: Vec<Vec<C64>> = Vec::with_capacity(21);
    vals.push(f(c)?);
    for &x in &XGK[..10] {
        vals.push(f(c - h * x)?);
        vals.push(f(c + h * x)?);
    }
    let dim = vals[0].len();
    let mut out = Vec::with_capacity(dim);
    let mut err = 0.0f64;
    for k in 0..dim {
        let fc = vals[0][k];
        let mut resk = fc.scale(WGK[10]);
        let mut resg = C64::zero();
        for j in 0..10 {
            let pair = vals[1 + 2 * j][k] + vals[2 + 2 * j][k];
            resk += pair.scale(WGK[j]);
            if j % 2 == 1 {
                resg += pair.scale(WG[j / 2]);
            }
        }
        let mean = resk.scale(0.5);
        let mut resasc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            resasc += WGK[j] * ((vals[1 + 2 * j][k] - mean).abs() + (vals[2 + 2 * j][k] - mean).abs());
        }
        let resasc = resasc * h.abs();
        let raw = ((resk - resg).scale(h)).abs();
        let e = if resasc > 0.0 && raw > 0.0 {
            resasc * (200.0 * raw / resasc).powf(1.5).min(1.0)
        } else {
            raw
        };
        // never claim better than rounding allows
        let floor = 50.0 * f64::EPSILON * (resk.scale(h)).abs();
        err = err.max(e.max(floor));
        out.push(resk.scale(h));
    }
    Ok((out, err))
}

#[derive(Clone, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: Vec<C64>,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err
            .total_cmp(&o.err)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

/// Outcome of [`integrate_adaptive`]: per-component values, the combined
/// error estimate and the number of integrand evaluations.
#[derive(Clone, Debug)]
pub struct AdaptiveOutcome {
    pub values: Vec<C64>,
    pub est_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Globally adaptive GK21 over the given initial panels: the segments with
/// the largest error estimates are bisected (in parallel batches) until the
/// total estimate is below `max(tol * |value|, tol_abs)`.
pub fn integrate_adaptive<F>(f: &F, panels: &[(f64, f64)], tol: f64, tol_abs: f64) -> Result<AdaptiveOutcome>
where
    F: Fn(f64) -> Result<Vec<C64>> + Sync,
{
    let eval = |&(a, b): &(f64, f64)| -> Result<Segment> {
        let (value, err) = gauss_kronrod_21(f, a, b)?;
        Ok(Segment { a, b, value, err })
    };
    let first: Vec<Segment> = panels.par_iter().map(eval).collect::<Result<_>>()?;
    let mut evaluations = 21 * first.len();
    let mut heap: BinaryHeap<Segment> = first.into_iter().collect();
    let summarize = |heap: &BinaryHeap<Segment>| {
        let mut segs: Vec<&Segment> = heap.iter().collect();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        let dim = segs.first().map_or(0, |s| s.value.len());
        let values: Vec<C64> = (0..dim)
            .map(|k| pairwise_sum(&segs.iter().map(|s| s.value[k]).collect::<Vec<_>>()))
            .collect();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        (values, err)
    };
    loop {
        let (values, err) = summarize(&heap);
        let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let target = (tol * scale).max(tol_abs);
        if err <= target || heap.len() >= MAX_SEGMENTS {
            return Ok(AdaptiveOutcome {
                values,
                est_error: err,
                evaluations,
                converged: err <= target,
            });
        }
        // bisect the worst segments, enough of them to cover the excess
        let mut picked = Vec::new();
        let mut removed = 0.0;
        while let Some(s) = heap.pop() {
            removed += s.err;
            picked.push(s);
            if picked.len() >= SPLIT_BATCH || err - removed <= 0.5 * target {
                break;
            }
        }
        let halves: Vec<(f64, f64)> = picked
            .iter()
            .flat_map(|s| {
                let m = 0.5 * (s.a + s.b);
                [(s.a, m), (m, s.b)]
            })
            .collect();
        if picked.iter().any(|s| !(0.5 * (s.a + s.b) > s.a && 0.5 * (s.a + s.b) < s.b)) {
            for s in picked {
                heap.push(s);
            }
            let (values, err) = summarize(&heap);
            return Ok(AdaptiveOutcome {
                values,
                est_error: err,
                evaluations,
                converged: false,
            });
        }
        let new: Vec<Segment> = halves.par_iter().map(eval).collect::<Result<_>>()?;
        evaluations += 21 * new.len();
        heap.extend(new);
    }
}

fn finish(out: AdaptiveOutcome, k: usize) -> Result<QuadResult> {
    let value = ComplexScalar::from_c64(out.values[k]);
    if !out.converged {
        return Err(Error::NoConvergence {
            value: value.to_string(),
            est_error: out.est_error,
        });
    }
    Ok(QuadResult {
        value,
        est_error: out.est_error,
        evaluations: out.evaluations,
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol >= MIN_TOL && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} below {MIN_TOL}")));
    }
    Ok(())
}

/// Panels on `[lo, hi]` no longer than `pi / |phase'(t)|`, where the phase
/// derivative is `log X - log(t / 2 pi)` for an integrand behaving like
/// `chi(s) X^{it}`; capped at `max_len` near the stationary point.
fn phase_panels(lo: f64, hi: f64, ln_x: f64, max_len: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut t = lo;
    while t < hi {
        let d = (ln_x - (t / TAU).ln()).abs();
        let h = (PI / d.max(1e-12)).min(max_len).max(1e-3);
        let next = if t + h >= hi - 1e-3 { hi } else { t + h };
        out.push((t, next));
        t = next;
    }
    out
}

/// `J(sigma, r, T) = int_T^{2T} chi(sigma + it) r^{it} dt`.
pub fn integrate_j(sigma: f64, r: f64, t: f64, tol: f64) -> Result<QuadResult> {
    if !(-1.0..=2.0).contains(&sigma) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} outside [-1, 2]")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("r = {r} must be positive")));
    }
    if !(t >= 10.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("T = {t} must be >= 10")));
    }
    check_tol(tol)?;
    let ln_r = Dd::from_f64(r).ln();
    let prec = Precision::double();
    let f = |u: f64| -> Result<Vec<C64>> {
        let c = chi_generic(Complex::new(sigma, u), prec)?;
        let (s, co) = f64::sin_cos_product(u, ln_r);
        Ok(vec![c * C64::new(co, s)])
    };
    let panels = phase_panels(t, 2.0 * t, ln_r.to_f64(), t.sqrt());
    finish(integrate_adaptive(&f, &panels, tol, tol)?, 0)
}

/// Move `t` into `[gamma_k + d, gamma_{k+1} - d]` for the zeros around it,
/// so that the set of ordinates below it is unchanged.
fn nudge(table: &ZeroTable, t: f64) -> Result<f64> {
    let g = table.ordinates();
    let k = table.count_below(t);
    let lo = if k > 0 { g[k - 1].to_f64() + CONTOUR_CLEARANCE } else { f64::NEG_INFINITY };
    let hi = match g.get(k) {
        Some(next) => next.to_f64() - CONTOUR_CLEARANCE,
        None => table.t_max() - CONTOUR_CLEARANCE,
    };
    if t + CONTOUR_CLEARANCE > table.t_max() {
        return Err(Error::OutOfCoverage {
            hi: t + CONTOUR_CLEARANCE,
            t_max: table.t_max(),
        });
    }
    if lo > hi {
        return Err(Error::ZeroTooClose(t));
    }
    Ok(t.clamp(lo, hi))
}

/// `(1/2 pi i) int (zeta'/zeta)(s) chi(s) X^s ds` around the rectangle with
/// vertices `c + iT1, c + iT2, 1 - c + iT2, 1 - c + iT1`,
/// `c = 1 + 1/log T2`, for several `X` at once. By the argument principle
/// this is `sum chi(rho) X^rho` over `T1 < gamma <= T2`.
pub fn contour_sums(xs: &[f64], t1: f64, t2: f64, table: &ZeroTable, tol: f64) -> Result<Vec<QuadResult>> {
    if xs.iter().any(|&x| !(x >= 1.0 && x.is_finite())) {
        return Err(Error::InvalidArgument("every X must be >= 1".into()));
    }
    if !(t1 >= 14.0 && t2 > t1) {
        return Err(Error::InvalidArgument(format!("need 14 <= T1 < T2, got ({t1}, {t2})")));
    }
    check_tol(tol)?;
    let t1 = nudge(table, t1)?;
    let t2 = nudge(table, t2)?;
    if t2 <= t1 {
        return Ok(xs
            .iter()
            .map(|_| QuadResult {
                value: ComplexScalar::zero(),
                est_error: 0.0,
                evaluations: 1,
            })
            .collect());
    }
    let c = 1.0 + 1.0 / t2.ln();
    let prec = Precision::double();
    let ln_x: Vec<Dd> = xs.iter().map(|&x| Dd::from_f64(x).ln()).collect();
    let integrand = |s: C64| -> Result<Vec<C64>> {
        let z = zeta_taylor(s, 1, prec)?;
        let g = (z[1] / z[0]) * chi_generic(s, prec)?;
        Ok(ln_x
            .iter()
            .map(|l| {
                let (sn, cs) = f64::sin_cos_product(s.im, *l);
                g * C64::new(cs, sn).scale((s.re * l.to_f64()).exp())
            })
            .collect())
    };
    let inv = 1.0 / TAU;
    // right and left legs: ds = i dt
    let right = |t: f64| integrand(C64::new(c, t)).map(|v| v.into_iter().map(|z| z.scale(inv)).collect());
    let left = |t: f64| integrand(C64::new(1.0 - c, t)).map(|v| v.into_iter().map(|z| z.scale(-inv)).collect());
    // horizontal legs: ds = d sigma, divided by 2 pi i
    let i_inv = C64::new(0.0, -inv);
    let bottom = |sg: f64| integrand(C64::new(sg, t1)).map(|v| v.into_iter().map(|z| z * i_inv).collect());
    let top = |sg: f64| integrand(C64::new(sg, t2)).map(|v| v.into_iter().map(|z| -(z * i_inv)).collect());

    let vertical = phase_panels(t1, t2, 0.0, 0.5);
    let horizontal: Vec<(f64, f64)> = (0..4)
        .map(|k| {
            let w = (2.0 * c - 1.0) / 4.0;
            (1.0 - c + k as f64 * w, 1.0 - c + (k + 1) as f64 * w)
        })
        .collect();
    let leg_tol = tol / 4.0;
    let legs = [
        integrate_adaptive(&right, &vertical, 0.0, leg_tol)?,
        integrate_adaptive(&top, &horizontal, 0.0, leg_tol)?,
        integrate_adaptive(&left, &vertical, 0.0, leg_tol)?,
        integrate_adaptive(&bottom, &horizontal, 0.0, leg_tol)?,
    ];
    let evaluations: usize = legs.iter().map(|l| l.evaluations).sum();
    let est_error: f64 = legs.iter().map(|l| l.est_error).sum();
    let converged = legs.iter().all(|l| l.converged);
    (0..xs.len())
        .map(|k| {
            let v: C64 = legs.iter().map(|l| l.values[k]).sum();
            let out = AdaptiveOutcome {
                values: vec![v],
                est_error,
                evaluations,
                converged,
            };
            finish(out, 0)
        })
        .collect()
}

/// Single-`X` form of [`contour_sums`].
pub fn contour_sum(x: f64, t1: f64, t2: f64, table: &ZeroTable, tol: f64) -> Result<QuadResult> {
    Ok(contour_sums(&[x], t1, t2, table, tol)?.remove(0))
}

/// `zeta^{(nu)}(s)` minus the two finite sums of its approximate functional
/// equation with cutoffs `floor((t/2pi)^alpha)` and
/// `floor((t/2pi)^{1-alpha})`.
pub fn afe_residual(s: ComplexScalar, alpha: f64, nu: u32, prec: Precision) -> Result<ComplexScalar> {
    let t = s.im;
    if !(t.to_f64() >= 10.0) {
        return Err(Error::Domain {
            op: "afe_residual",
            reason: format!("requires Im s >= 10, got {}", t.to_f64()),
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            op: "afe_residual",
            reason: format!("alpha = {alpha} outside (0, 1)"),
        });
    }
    if nu == 0 || nu as usize > MAX_ORDER {
        return Err(Error::Domain {
            op: "afe_residual",
            reason: format!("order {nu} outside 1..={MAX_ORDER}"),
        });
    }
    let nu_us = nu as usize;
    let u = t.to_f64() / TAU;
    let n1 = u.powf(alpha).floor() as usize;
    let n2 = u.powf(1.0 - alpha).floor() as usize;
    let l = ell(t);
    let sign = if nu.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut first = ComplexScalar::zero();
    for n in 2..=n1 {
        let ln = ln_int(n);
        // n^{-s}
        let (sn, cs) = Dd::sin_cos_product(-t, ln);
        let m = (-(s.re * ln)).exp();
        first += ComplexScalar::new(cs, sn).scale(m * ln.powi(nu as i32));
    }
    let mut second = ComplexScalar::zero();
    for n in 1..=n2 {
        let ln = ln_int(n);
        // n^{s-1}
        let (sn, cs) = Dd::sin_cos_product(t, ln);
        let m = ((s.re - 1.0) * ln).exp();
        second += ComplexScalar::new(cs, sn).scale(m * (ln - l).powi(nu as i32));
    }
    let chi = chi_generic(s, prec)?;
    let approx = first.scale_f64(sign) + chi * second;
    let factorial = (1..=nu_us).fold(Dd::ONE, |a, k| a * (k as f64));
    let exact = zeta_taylor(s, nu_us, prec)?[nu_us].scale(factorial);
    Ok(exact - approx)
}

/// Error shape `t^{-alpha/2} (log t)^{nu+1} + t^{-(1-alpha)/2} (log t)^{nu+1}`.
pub fn afe_budget(t: f64, alpha: f64, nu: u32) -> f64 {
    let lp = t.ln().powi(nu as i32 + 1);
    t.powf(-alpha / 2.0) * lp + t.powf(-(1.0 - alpha) / 2.0) * lp
}
