//! Partial sums of `chi(rho) X^rho` per zero, rendered as CSV and SVG.

use std::f64::consts::PI;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use zx_core::asymptotics::{classify_regime, Regime};
use zx_core::dd::to_fixed_string;
use zx_core::zeros::ZeroTable;
use zx_core::zerosums::{SumKind, SumSpec};
use zx_core::{ComplexScalar, Dd, Precision};

pub const CSV_HEADER: &str = "T,re,im,class";
const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 80.0;

#[derive(Clone, Debug, PartialEq)]
pub struct FigureRow {
    pub t: Dd,
    pub value: ComplexScalar,
    pub class: Regime,
}

/// One row per zero in `(t_start, t_max]`: the sum over `(t_start, gamma]`.
pub fn figure_rows(table: &ZeroTable, x: f64, t_start: f64, t_max: f64, prec: Precision) -> Result<Vec<FigureRow>> {
    if !(x >= 1.0 && x.is_finite()) {
        bail!("X = {x} must be >= 1");
    }
    if t_max <= t_start {
        bail!("empty range ({t_start}, {t_max}]");
    }
    let w = table.window(t_start, t_max)?;
    let sums = SumSpec::new(SumKind::ChiXRho, x, 0, w)?.partial_sums(prec)?;
    Ok(w.iter()
        .zip(sums)
        .map(|(g, value)| FigureRow {
            t: g,
            value,
            class: classify_regime(x, g.to_f64()),
        })
        .collect())
}

fn class_label(r: Regime, x: f64) -> String {
    match r {
        Regime::AboveBand => format!("T &lt; {:.1} (pi X)", PI * x),
        Regime::InBand => format!("{:.1} &lt;= T &lt; {:.1}", PI * x, 2.0 * PI * x),
        Regime::BelowBand => format!("T &gt;= {:.1} (2 pi X)", 2.0 * PI * x),
    }
}

fn colour(r: Regime) -> &'static str {
    match r {
        Regime::AboveBand => "#1f4fbf",
        Regime::InBand => "#c8201e",
        Regime::BelowBand => "#1e8c3a",
    }
}

pub fn to_csv(rows: &[FigureRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            to_fixed_string(r.t, 12),
            r.value.re.to_f64(),
            r.value.im.to_f64(),
            r.class.name()
        );
    }
    out
}

/// Parsed CSV row: `(T, re, im, class)`.
pub type CsvRow = (f64, f64, f64, Regime);

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        bail!("missing header `{CSV_HEADER}`");
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                bail!("row {}: expected 4 fields", i + 2);
            }
            let class = match f[3] {
                "below-band" => Regime::BelowBand,
                "in-band" => Regime::InBand,
                "above-band" => Regime::AboveBand,
                other => bail!("row {}: unknown class `{other}`", i + 2),
            };
            Ok((f[0].parse()?, f[1].parse()?, f[2].parse()?, class))
        })
        .collect()
}

/// Ticks at 1, 2 or 5 times a power of ten covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn padded_range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-9);
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        format!("{}", (v * 1e3).round() / 1e3)
    }
}

/// Scatter plot of the rows in the complex plane; the two axes are scaled
/// independently.
pub fn to_svg(rows: &[FigureRow], x: f64) -> String {
    let (x0, x1) = padded_range(rows.iter().map(|r| r.value.re.to_f64()));
    let (y0, y1) = padded_range(rows.iter().map(|r| r.value.im.to_f64()));
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let sx = |v: f64| MARGIN + (v - x0) / (x1 - x0) * pw;
    let sy = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * ph;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    let _ = writeln!(s, "<g font-family=\"sans-serif\" font-size=\"11\">");
    for v in ticks(x0, x1) {
        let px = sx(v);
        let _ = writeln!(
            s,
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/><text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 5.0,
            HEIGHT - MARGIN + 18.0,
            tick_label(v)
        );
    }
    for v in ticks(y0, y1) {
        let py = sy(v);
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{MARGIN}\" y2=\"{py:.2}\" stroke=\"black\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            MARGIN - 5.0,
            MARGIN - 8.0,
            py + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">Re S</text>",
        WIDTH / 2.0,
        HEIGHT - 25.0
    );
    let _ = writeln!(
        s,
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">Im S</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">S(X, T), X = {x}, {} points</text>",
        WIDTH / 2.0,
        rows.len()
    );
    for (k, r) in [Regime::AboveBand, Regime::InBand, Regime::BelowBand].into_iter().enumerate() {
        let ly = 50.0 + 14.0 * k as f64;
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{}\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            WIDTH - MARGIN - 200.0,
            ly - 4.0,
            colour(r),
            WIDTH - MARGIN - 190.0,
            ly,
            class_label(r, x)
        );
    }
    s.push_str("</g>\n");
    for r in [Regime::AboveBand, Regime::InBand, Regime::BelowBand] {
        let _ = writeln!(s, "<g class=\"{}\" fill=\"{}\">", r.name(), colour(r));
        for row in rows.iter().filter(|row| row.class == r) {
            let _ = writeln!(
                s,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.2\"/>",
                sx(row.value.re.to_f64()),
                sy(row.value.im.to_f64())
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}
