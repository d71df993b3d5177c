//! Double-double real arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, which
//! carries roughly 106 bits (about 31 decimal digits) of significand. The
//! error-free transforms follow Dekker and Knuth; the transcendental
//! functions use argument reduction followed by short Taylor series.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

/// Relative precision of a double-double value.
pub const DD_EPS: f64 = 4.930_380_657_631_324e-32;

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[cfg(target_feature = "fma")]
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[cfg(not(target_feature = "fma"))]
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    const SPLIT: f64 = 134_217_729.0; // 2^27 + 1
    #[inline(always)]
    fn split(a: f64) -> (f64, f64) {
        if a.abs() > 6.69e299 {
            // SPLIT * a would overflow
            let b = a * 3.725_290_298_461_914e-9; // 2^-28
            let t = SPLIT * b;
            let hi = t - (t - b);
            let lo = b - hi;
            return (hi * 268_435_456.0, lo * 268_435_456.0);
        }
        let t = SPLIT * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const TAU: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };
    pub const FRAC_PI_2: Dd = Dd {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };
    pub const LN_2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    #[inline(always)]
    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline(always)]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    #[inline(always)]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact sum of two doubles.
    #[inline(always)]
    pub fn sum_f64(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline(always)]
    pub fn prod_f64(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline(always)]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline(always)]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline(always)]
    pub fn signum(self) -> f64 {
        if self.hi > 0.0 {
            1.0
        } else if self.hi < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    #[inline(always)]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let s2 = s2 + self.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    /// Multiplication by an exact power of two.
    #[inline(always)]
    pub fn scale(self, pow2: f64) -> Dd {
        Dd {
            hi: self.hi * pow2,
            lo: self.lo * pow2,
        }
    }

    #[inline(always)]
    pub fn sqr(self) -> Dd {
        let (p1, p2) = two_prod(self.hi, self.hi);
        let p2 = p2 + 2.0 * self.hi * self.lo + self.lo * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn floor(self) -> Dd {
        let hi = self.hi.floor();
        if hi == self.hi {
            let lo = self.lo.floor();
            let (h, l) = quick_two_sum(hi, lo);
            Dd { hi: h, lo: l }
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round(self) -> Dd {
        let hi = self.hi.round();
        if hi == self.hi {
            let lo = self.lo.round();
            let (h, l) = quick_two_sum(hi, lo);
            Dd { hi: h, lo: l }
        } else if (hi - self.hi).abs() == 0.5 && self.lo != 0.0 {
            // tie in hi broken by lo
            let adj = if self.lo > 0.0 { self.hi + 0.5 } else { self.hi - 0.5 };
            Dd { hi: adj, lo: 0.0 }
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            if self.hi == 0.0 {
                return Dd::ZERO;
            }
            return Dd::from_f64(f64::NAN);
        }
        // One Newton step on the f64 estimate doubles the precision.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let diff = self - Dd::prod_f64(ax, ax);
        Dd::sum_f64(ax, diff.hi * (x * 0.5))
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        const INV_K: f64 = 1.0 / 512.0;
        let k = (self.hi / Dd::LN_2.hi).round();
        let r = (self - Dd::LN_2.mul_f64(k)).scale(INV_K);
        // expm1(r) by Taylor series, |r| < 7e-4.
        let mut s = r;
        let mut term = r;
        for i in 2..=12u32 {
            term = term * r / i as f64;
            s += term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        // expm1(2x) = 2 expm1(x) + expm1(x)^2
        for _ in 0..9 {
            s = s.scale(2.0) + s.sqr();
        }
        (s + 1.0).scale(2f64.powi(k as i32))
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        // Split off the binary exponent so exp(-y) stays well inside the
        // normal range, then one Newton step on exp(y) = m.
        let e = self.hi.abs().log2().floor();
        let m = if e.abs() > 60.0 { self.scale(2f64.powi(-(e as i32))) } else { self };
        let y = Dd::from_f64(m.hi.ln());
        let y = y + m * (-y).exp() - 1.0;
        if e.abs() > 60.0 {
            y + Dd::LN_2 * e
        } else {
            y
        }
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Dd, Dd) {
        if self.hi == 0.0 {
            return (Dd::ZERO, Dd::ONE);
        }
        let r = reduce_tau(self);
        // quadrant reduction to |r| <= pi/4
        let q = (r.hi / Dd::FRAC_PI_2.hi).round();
        let r = r - Dd::FRAC_PI_2.mul_f64(q);
        let (s, c) = sin_cos_small(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }

    /// Four-quadrant arctangent of `y/x`.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if x.is_zero() && y.is_zero() {
            return Dd::ZERO;
        }
        // Newton refinement of the f64 angle: z <- z + (y cos z - x sin z)/(x cos z + y sin z)
        let mut z = Dd::from_f64(y.hi.atan2(x.hi));
        let r = (x.sqr() + y.sqr()).sqrt();
        let (xn, yn) = (x / r, y / r);
        for _ in 0..2 {
            let (s, c) = z.sin_cos();
            z += yn * c - xn * s;
        }
        z
    }

    pub fn hypot(a: Dd, b: Dd) -> Dd {
        let (a, b) = (a.abs(), b.abs());
        let m = if a > b { a } else { b };
        if m.is_zero() {
            return Dd::ZERO;
        }
        let inv = 1.0 / m.hi;
        let (x, y) = (a.mul_f64(inv), b.mul_f64(inv));
        (x.sqr() + y.sqr()).sqrt() * m
    }

    /// Reduce into `(-pi, pi]`.
    pub fn rem_tau(self) -> Dd {
        reduce_tau(self)
    }
}

/// `x - 2 pi k` with `k` the nearest integer to `x / 2 pi`. The constant is
/// carried to three words so arguments of size up to ~1e8 keep full relative
/// accuracy in the reduced value.
fn reduce_tau(x: Dd) -> Dd {
    const TAU_3: f64 = -5.989_539_619_436_679e-33;
    let k = (x.hi / Dd::TAU.hi).round();
    if k == 0.0 {
        return x;
    }
    let (p1, e1) = two_prod(Dd::TAU.hi, k);
    let (p2, e2) = two_prod(Dd::TAU.lo, k);
    let r = (x - Dd::new(p1, 0.0)) - Dd::sum_f64(e1, p2) - Dd::new(e2, TAU_3 * k);
    // the rounding of k may leave r slightly outside (-pi, pi]
    if r > Dd::PI {
        r - Dd::TAU
    } else if r < -Dd::PI {
        r + Dd::TAU
    } else {
        r
    }
}

struct SinCosTable {
    // sin and cos of k/64 for k in 0..=51 (covers [0, pi/4 + 1/128])
    sin: Vec<Dd>,
    cos: Vec<Dd>,
}

const TABLE_STEP: f64 = 1.0 / 64.0;

fn table() -> &'static SinCosTable {
    static TABLE: OnceLock<SinCosTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut sin = Vec::with_capacity(52);
        let mut cos = Vec::with_capacity(52);
        for k in 0..52 {
            let (s, c) = taylor_sin_cos(Dd::from_f64(k as f64 * TABLE_STEP), 40);
            sin.push(s);
            cos.push(c);
        }
        SinCosTable { sin, cos }
    })
}

fn taylor_sin_cos(x: Dd, max_terms: usize) -> (Dd, Dd) {
    let x2 = x.sqr();
    let mut s = x;
    let mut c = Dd::ONE;
    let mut ts = x;
    let mut tc = Dd::ONE;
    for i in 1..=max_terms {
        let k = (2 * i) as f64;
        tc = -tc * x2 / ((k - 1.0) * k);
        ts = -ts * x2 / (k * (k + 1.0));
        c += tc;
        s += ts;
        if tc.hi.abs() < 1e-36 && ts.hi.abs() < 1e-36 {
            break;
        }
    }
    (s, c)
}

/// sin/cos for |x| <= pi/4 + small, via table lookup at multiples of 1/64.
fn sin_cos_small(x: Dd) -> (Dd, Dd) {
    let neg = x.hi < 0.0;
    let ax = x.abs();
    let k = (ax.hi / TABLE_STEP).round() as usize;
    let t = table();
    let d = ax - Dd::from_f64(k as f64 * TABLE_STEP);
    // |d| <= 1/128: seven Taylor terms reach below 1e-33
    let d2 = d.sqr();
    let sd = d * (Dd::ONE
        - d2 / 6.0 * (Dd::ONE - d2 / 20.0 * (Dd::ONE - d2 / 42.0 * (Dd::ONE - d2 / 72.0 * (Dd::ONE - d2 / 110.0)))));
    let cd = Dd::ONE
        - d2 / 2.0 * (Dd::ONE - d2 / 12.0 * (Dd::ONE - d2 / 30.0 * (Dd::ONE - d2 / 56.0 * (Dd::ONE - d2 / 90.0 * (Dd::ONE - d2 / 132.0)))));
    let s = t.sin[k] * cd + t.cos[k] * sd;
    let c = t.cos[k] * cd - t.sin[k] * sd;
    if neg {
        (-s, c)
    } else {
        (s, c)
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    /// Decimal rendering with up to 32 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(32).min(34);
        write!(f, "{}", to_decimal_string(*self, digits))
    }
}

/// Scientific-notation rendering with `digits` significant digits.
pub fn to_decimal_string(x: Dd, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{}", x.hi);
    }
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.hi < 0.0;
    let mut v = x.abs();
    let mut e = v.hi.log10().floor() as i32;
    v /= Dd::from_f64(10.0).powi(e);
    if v.hi >= 10.0 {
        v = v / 10.0;
        e += 1;
    } else if v.hi < 1.0 {
        v = v * 10.0;
        e -= 1;
    }
    let mut out = Vec::with_capacity(digits + 1);
    for _ in 0..=digits {
        let d = v.hi.floor().clamp(0.0, 9.0);
        out.push(d as u8);
        v = (v - d) * 10.0;
    }
    // round on the extra digit
    if out[digits] >= 5 {
        let mut i = digits;
        loop {
            if i == 0 {
                out.insert(0, 1);
                e += 1;
                break;
            }
            i -= 1;
            if out[i] == 9 {
                out[i] = 0;
            } else {
                out[i] += 1;
                break;
            }
        }
    }
    out.truncate(digits);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push((b'0' + out[0]) as char);
    if digits > 1 {
        s.push('.');
        for d in &out[1..] {
            s.push((b'0' + d) as char);
        }
    }
    s.push_str(&format!("e{e}"));
    s
}

/// Fixed-point rendering with `decimals` digits after the point.
pub fn to_fixed_string(x: Dd, decimals: usize) -> String {
    if !x.is_finite() {
        return format!("{}", x.hi);
    }
    let neg = x.hi < 0.0;
    let v = (x.abs() * Dd::from_f64(10.0).powi(decimals as i32)).round();
    // split into base-10^15 limbs, most significant last
    let limb = 1e15;
    let mut rest = v;
    let mut limbs = Vec::new();
    loop {
        let q = (rest / limb).floor();
        let r = (rest - q * limb).to_f64().round();
        let (q, r) = if r >= limb { (q + 1.0, r - limb) } else if r < 0.0 { (q - 1.0, r + limb) } else { (q, r) };
        limbs.push(r as u64);
        rest = q;
        if rest.hi < 0.5 {
            break;
        }
    }
    let mut digits = limbs.pop().unwrap().to_string();
    for l in limbs.iter().rev() {
        digits.push_str(&format!("{l:015}"));
    }
    if digits.len() <= decimals {
        digits = format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits);
    }
    let split = digits.len() - decimals;
    let mut s = String::new();
    if neg && v.hi != 0.0 {
        s.push('-');
    }
    s.push_str(&digits[..split]);
    if decimals > 0 {
        s.push('.');
        s.push_str(&digits[split..]);
    }
    s
}

/// Parse a decimal string (optional sign, digits, point, exponent) exactly
/// to double-double accuracy.
pub fn parse_decimal(text: &str) -> Option<Dd> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    // accumulate digits in chunks of 15 to stay exact per chunk
    let digits: String = int_part.chars().chain(frac_part.chars()).collect();
    let mut acc = Dd::ZERO;
    for chunk in digits.as_bytes().chunks(15) {
        let s = std::str::from_utf8(chunk).ok()?;
        let v: u64 = s.parse().ok()?;
        acc = acc * Dd::from_f64(10f64.powi(chunk.len() as i32)) + Dd::from_f64(v as f64);
    }
    let e10 = exp - frac_part.len() as i32;
    let scale = Dd::from_f64(10.0).powi(e10.abs());
    let v = if e10 >= 0 { acc * scale } else { acc / scale };
    Some(if neg { -v } else { v })
}

/// Serialized as the nearest double.
impl serde::Serialize for Dd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

impl<'de> serde::Deserialize<'de> for Dd {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Dd::from_f64)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline(always)]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline(always)]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline(always)]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline(always)]
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline(always)]
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline(always)]
    fn add(self, b: f64) -> Dd {
        self.add_f64(b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    #[inline(always)]
    fn sub(self, b: f64) -> Dd {
        self.add_f64(-b)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline(always)]
    fn mul(self, b: f64) -> Dd {
        self.mul_f64(b)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    #[inline(always)]
    fn div(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let e = e + self.lo - p2;
        let q2 = (s + e) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    #[inline(always)]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    #[inline(always)]
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl MulAssign for Dd {
    #[inline(always)]
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

impl DivAssign for Dd {
    #[inline(always)]
    fn div_assign(&mut self, b: Dd) {
        *self = *self / b;
    }
}

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}
