//! Sign changes of Hardy's Z between Gram points, Rosser blocks and Brent's
//! completeness test.

use rayon::prelude::*;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::special::{gram_point, hardy_z, hardy_z_and_derivative, hardy_z_and_derivative_generic, hardy_z_rs, theta};

use super::{ZeroSource, ZeroTable};

const RS_MIN_T: f64 = 200.0;
const MAX_SUBDIVISIONS: usize = 10;
const SMALL_INDEX: i64 = 60;
pub const MAX_T: f64 = 1e5;
pub const MIN_TOL: f64 = 1e-12;

/// `Z(t)` with enough accuracy to trust its sign: Riemann–Siegel away from
/// zero crossings, Euler–Maclaurin otherwise.
pub fn z_for_sign(t: f64) -> Result<f64> {
    if t >= RS_MIN_T {
        let z = hardy_z_rs(t, 3);
        let guard = 1e-3 * (t / 100.0).powf(-1.75);
        if z.abs() > guard {
            return Ok(z);
        }
    }
    hardy_z::<f64>(t, Precision::double())
}

/// Number of consecutive Rosser blocks needed by Brent's test at height `g`.
pub fn brent_block_count(g: f64) -> usize {
    let l = g.ln();
    ((0.0061 * l * l + 0.08 * l).ceil() as usize).max(1)
}

fn changes(samples: &[(f64, f64)]) -> usize {
    samples.windows(2).filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0)).count()
}

fn eval_all(ts: &[f64]) -> Result<Vec<f64>> {
    ts.par_iter().map(|&t| z_for_sign(t)).collect()
}

#[derive(Clone, Debug)]
struct Block {
    a: i64,
    b: i64,
    samples: Vec<(f64, f64)>,
}

impl Block {
    fn changes(&self) -> usize {
        changes(&self.samples)
    }

    fn rosser(&self) -> bool {
        self.changes() as i64 >= self.b - self.a
    }

    fn refine(&mut self) -> Result<()> {
        let mut depth = 0;
        while !self.rosser() && depth < MAX_SUBDIVISIONS {
            let mids: Vec<f64> = self.samples.windows(2).map(|w| 0.5 * (w[0].0 + w[1].0)).collect();
            let z = eval_all(&mids)?;
            let mut merged = Vec::with_capacity(self.samples.len() + mids.len());
            for (i, s) in self.samples.iter().enumerate() {
                merged.push(*s);
                if i < mids.len() {
                    merged.push((mids[i], z[i]));
                }
            }
            self.samples = merged;
            depth += 1;
        }
        Ok(())
    }
}

fn gram_parity(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Gram points and their Z values from `first` upward, split into Gram
/// blocks between consecutive good Gram points.
struct GramScan {
    first: i64,
    gram: Vec<(f64, f64)>,
    blocks: Vec<Block>,
    /// First index not yet assigned to a completed block.
    open: Option<i64>,
}

impl GramScan {
    fn new(first: i64) -> Self {
        GramScan {
            first,
            gram: Vec::new(),
            blocks: Vec::new(),
            open: None,
        }
    }

    fn last_index(&self) -> i64 {
        self.first + self.gram.len() as i64 - 1
    }

    fn gram(&self, n: i64) -> (f64, f64) {
        self.gram[(n - self.first) as usize]
    }

    fn good(&self, n: i64) -> bool {
        gram_parity(n) * self.gram(n).1 > 0.0
    }

    fn extend_to(&mut self, last: i64) -> Result<()> {
        let from = self.last_index() + 1;
        if last < from {
            return Ok(());
        }
        let pts: Vec<(f64, f64)> = (from..=last)
            .into_par_iter()
            .map(|n| {
                let g = gram_point(n)?;
                Ok((g, z_for_sign(g)?))
            })
            .collect::<Result<_>>()?;
        self.gram.extend(pts);
        let mut fresh = Vec::new();
        for n in from..=last {
            if !self.good(n) {
                continue;
            }
            if let Some(a) = self.open {
                let samples = (a..=n).map(|k| self.gram(k)).collect();
                fresh.push(Block { a, b: n, samples });
            }
            self.open = Some(n);
        }
        fresh.par_iter_mut().try_for_each(|b| b.refine())?;
        self.blocks.extend(fresh);
        Ok(())
    }

    /// Index `j` such that blocks `j..j+k` start at a good Gram point
    /// `>= t`, all satisfy Rosser's rule and `k` meets Brent's bound.
    fn upper_run(&self, t: f64) -> Option<usize> {
        let start = self.blocks.iter().position(|b| self.gram(b.a).0 >= t)?;
        (start..self.blocks.len()).find(|&j| {
            // a run spans far less than 50 units of height here
            let k = brent_block_count(self.gram(self.blocks[j].a).0 + 50.0);
            j + k <= self.blocks.len() && self.blocks[j..j + k].iter().all(Block::rosser)
        })
    }

    /// Index `j` such that blocks `j-k..j` end at a good Gram point `<= t`
    /// and all satisfy Rosser's rule.
    fn lower_run(&self, t: f64) -> Option<usize> {
        (0..=self.blocks.len()).rev().find(|&j| {
            if j == 0 || self.gram(self.blocks[j - 1].b).0 > t {
                return false;
            }
            let k = brent_block_count(self.gram(self.blocks[j - 1].b).0);
            j >= k && self.blocks[j - k..j].iter().all(Block::rosser)
        })
    }

    fn extend_for_upper(&mut self, t: f64) -> Result<usize> {
        loop {
            if let Some(j) = self.upper_run(t) {
                return Ok(j);
            }
            if self.gram.last().is_some_and(|g| g.0 > t + 200.0) {
                return Err(Error::AuditFailure(format!(
                    "no run of Rosser blocks found above t = {t}"
                )));
            }
            let last = self.last_index();
            self.extend_to(last + 16)?;
        }
    }
}

fn gram_index_below(t: f64) -> i64 {
    (theta(t) / std::f64::consts::PI).floor() as i64
}

fn validate_height(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 14.0) {
        return Err(Error::Domain {
            op: "count_zeros",
            reason: format!("requires T >= 14, got {t}"),
        });
    }
    if t > MAX_T {
        return Err(Error::Domain {
            op: "count_zeros",
            reason: format!("T = {t} beyond supported height {MAX_T}"),
        });
    }
    Ok(())
}

/// `N(T)`, the number of zeros with `0 < gamma <= T`.
///
/// Sign changes are counted between two runs of Rosser blocks; Brent's
/// test turns them into an exact count, which is then checked against
/// `theta(T)/pi + 1` through an explicit bound on `S(T)`.
pub fn count_zeros(t: f64) -> Result<usize> {
    validate_height(t)?;
    count_unchecked(t)
}

pub(crate) fn count_unchecked(t: f64) -> Result<usize> {
    if t < 14.0 {
        return Ok(0);
    }
    let n_t = gram_index_below(t);
    let mut margin = 24i64;
    loop {
        let first = if n_t < SMALL_INDEX { -1 } else { (n_t - margin).max(-1) };
        let mut scan = GramScan::new(first);
        scan.extend_to(n_t + 12)?;
        let upper = scan.extend_for_upper(t)?;
        let lower = if first == -1 { Some(0) } else { scan.lower_run(t) };
        let Some(lower) = lower else {
            margin *= 2;
            if margin > 1000 {
                return Err(Error::AuditFailure(format!(
                    "no run of Rosser blocks found below t = {t}"
                )));
            }
            continue;
        };
        let m = if lower == 0 { scan.blocks[0].a } else { scan.blocks[lower - 1].b };
        let n = scan.blocks[upper].a;
        let mut samples: Vec<(f64, f64)> = Vec::new();
        for b in &scan.blocks[lower..upper] {
            let skip = usize::from(!samples.is_empty());
            samples.extend_from_slice(&b.samples[skip..]);
        }
        if samples.is_empty() {
            samples.push(scan.gram(m));
        }
        if !samples.iter().any(|s| s.0 == t) {
            let k = samples.partition_point(|s| s.0 < t);
            samples.insert(k, (t, z_for_sign(t)?));
        }
        let total = changes(&samples);
        let expected = (n - m) as usize;
        if total != expected {
            return Err(Error::AuditFailure(format!(
                "{total} sign changes between Gram points {m} and {n}, expected {expected}"
            )));
        }
        let k = samples.partition_point(|s| s.0 <= t);
        let below = changes(&samples[..k]);
        let count = (m + 1) as usize + below;
        let s_t = count as f64 - theta(t) / std::f64::consts::PI - 1.0;
        let l = t.ln();
        let bound = 0.112 * l + 0.278 * l.ln() + 2.51;
        if s_t.abs() > bound {
            return Err(Error::AuditFailure(format!(
                "count {count} at T = {t} gives S(T) = {s_t:.3}, outside +-{bound:.3}"
            )));
        }
        return Ok(count);
    }
}

/// All zeros with `gamma <= t_max`, each refined to absolute accuracy `tol`.
pub fn find_zeros(t_max: f64, tol: f64) -> Result<ZeroTable> {
    if !(t_max.is_finite() && (14.0..=MAX_T).contains(&t_max)) {
        return Err(Error::Domain {
            op: "find_zeros",
            reason: format!("requires 14 <= t_max <= {MAX_T}, got {t_max}"),
        });
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::Domain {
            op: "find_zeros",
            reason: format!("tolerance {tol} below {MIN_TOL}"),
        });
    }
    let mut scan = GramScan::new(-1);
    scan.extend_to(gram_index_below(t_max) + 12)?;
    let upper = scan.extend_for_upper(t_max)?;
    let n = scan.blocks[upper].a;
    let mut brackets = Vec::new();
    let mut found = 0usize;
    for b in &scan.blocks[..upper] {
        for w in b.samples.windows(2) {
            if (w[0].1 > 0.0) != (w[1].1 > 0.0) {
                found += 1;
                if w[0].0 < t_max {
                    brackets.push((w[0], w[1]));
                }
            }
        }
    }
    let expected = (n + 1) as usize;
    if found != expected {
        return Err(Error::MissedZero {
            lo: scan.gram(-1).0,
            hi: scan.gram(n).0,
            found,
            expected,
        });
    }
    let roots: Vec<Dd> = brackets
        .par_iter()
        .map(|&(a, b)| refine(a, b, tol))
        .collect::<Result<_>>()?;
    let ordinates: Vec<Dd> = roots.into_iter().filter(|g| g.to_f64() <= t_max).collect();
    ZeroTable::new(ordinates, tol, ZeroSource::Computed, t_max)
}

/// Root of Z in a sign-change bracket: regula falsi on the scanning
/// evaluator, then Newton on Euler–Maclaurin values.
fn refine(a: (f64, f64), b: (f64, f64), tol: f64) -> Result<Dd> {
    // Riemann-Siegel values locate the root to about its own error; the
    // bracket endpoints from the scan stay the safety net
    let z_fast = |t: f64| if t >= RS_MIN_T { Ok(hardy_z_rs(t, 3)) } else { hardy_z::<f64>(t, Precision::double()) };
    let (mut lo, mut zlo) = a;
    let (mut hi, mut zhi) = b;
    let mut side = 0i8;
    for _ in 0..100 {
        if hi - lo < 1e-9 * hi.max(1.0) {
            break;
        }
        let mut x = (lo * zhi - hi * zlo) / (zhi - zlo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let z = z_fast(x)?;
        if z == 0.0 {
            lo = x;
            hi = x;
            break;
        }
        if (z > 0.0) == (zlo > 0.0) {
            lo = x;
            zlo = z;
            if side == -1 {
                zhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            zhi = z;
            if side == 1 {
                zlo *= 0.5;
            }
            side = 1;
        }
    }
    let (lo0, hi0) = (a.0, b.0);
    let mut x = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..12 {
        let (z, dz) = hardy_z_and_derivative(x)?;
        if z == 0.0 {
            converged = true;
            break;
        }
        let step = z / dz;
        x -= step;
        if !(x > lo0 && x < hi0) {
            break;
        }
        // quadratic convergence: the next correction is about step^2 * |Z''/Z'|
        if 16.0 * step * step <= 0.25 * tol || step.abs() <= 4.0 * f64::EPSILON * x {
            converged = true;
            break;
        }
    }
    if !converged {
        x = bisect_em(a, b, tol)?;
    }
    let mut root = Dd::from_f64(x);
    if tol < 16.0 * f64::EPSILON * x {
        let prec = Precision::default();
        for _ in 0..2 {
            let (z, dz) = hardy_z_and_derivative_generic(root, prec)?;
            root -= z / dz;
        }
        if !(root.to_f64() > lo0 && root.to_f64() < hi0) {
            return Err(Error::RefinementFailure(x));
        }
    }
    Ok(root)
}

fn bisect_em(a: (f64, f64), b: (f64, f64), tol: f64) -> Result<f64> {
    let z_em = |t: f64| hardy_z::<f64>(t, Precision::double());
    let (mut lo, mut hi) = (a.0, b.0);
    let mut zlo = z_em(lo)?;
    let zhi = z_em(hi)?;
    if (zlo > 0.0) == (zhi > 0.0) {
        return Err(Error::RefinementFailure(0.5 * (lo + hi)));
    }
    while hi - lo > tol && hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        let z = z_em(mid)?;
        if (z > 0.0) == (zlo > 0.0) {
            lo = mid;
            zlo = z;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Spot audit of a table: for five deterministic pseudo-random prefixes
/// `gamma_1..gamma_k`, the zero count at a height just past `gamma_k` must
/// be `k`.
pub fn audit_table(table: &ZeroTable) -> Result<()> {
    let g = table.ordinates();
    if g.is_empty() {
        return Ok(());
    }
    let golden = 0.618_033_988_749_894_9;
    let mut picks: Vec<usize> = (0..5)
        .map(|i| {
            let u = (0.5 + golden * i as f64).fract();
            1 + ((u * g.len() as f64) as usize).min(g.len() - 1)
        })
        .collect();
    picks.sort_unstable();
    picks.dedup();
    for k in picks {
        let gk = g[k - 1].to_f64();
        let t = match g.get(k) {
            Some(next) => 0.5 * (gk + next.to_f64()),
            None => gk + 1e-4,
        };
        if t > MAX_T {
            continue;
        }
        let count = count_unchecked(t)?;
        if count != k {
            return Err(Error::AuditFailure(format!(
                "table has {k} ordinates up to {gk}, but N({t}) = {count}"
            )));
        }
    }
    Ok(())
}
