//! Plain-text zero tables and the binary `ZTBL` cache.

use std::fs;
use std::path::Path;

use crate::dd::{parse_decimal, to_fixed_string, Dd};
use crate::error::{Error, Result};

use super::scan::{audit_table, find_zeros};
use super::{PlainTextLayout, ZeroSource, ZeroTable};

pub const CACHE_MAGIC: &[u8; 4] = b"ZTBL";
/// Version written by [`write_cache`]; version 1 files (no trailer) are
/// still read.
pub const CACHE_VERSION: u32 = 2;
const MIN_DECIMALS: usize = 9;
const HEADER_LEN: usize = 16;
const TRAILER_LEN: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroFormat {
    PlainText,
}

/// Parse a plain-text table: one decimal ordinate per line with at least
/// nine digits after the point, strictly increasing.
pub fn parse_plain_text(text: &str) -> Result<ZeroTable> {
    let crlf = text.contains("\r\n");
    let trailing_newline = text.ends_with('\n');
    let mut lines = Vec::new();
    let mut ordinates: Vec<Dd> = Vec::new();
    let mut min_decimals = usize::MAX;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let token = raw.trim();
        let decimals = match token.split_once('.') {
            Some((int, frac))
                if !int.is_empty()
                    && int.bytes().all(|b| b.is_ascii_digit())
                    && frac.bytes().all(|b| b.is_ascii_digit()) =>
            {
                frac.len()
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected a decimal ordinate, found `{token}`"),
                })
            }
        };
        if decimals < MIN_DECIMALS {
            return Err(Error::Parse {
                line,
                message: format!("`{token}` has {decimals} decimal places, need at least {MIN_DECIMALS}"),
            });
        }
        let value = parse_decimal(token).ok_or_else(|| Error::Parse {
            line,
            message: format!("cannot parse `{token}`"),
        })?;
        if let Some(prev) = ordinates.last() {
            if !(*prev < value) {
                return Err(Error::MonotonicityViolation {
                    line,
                    previous: prev.to_f64(),
                    value: value.to_f64(),
                });
            }
        }
        min_decimals = min_decimals.min(decimals);
        ordinates.push(value);
        lines.push(raw.to_string());
    }
    if ordinates.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no ordinates".into(),
        });
    }
    let t_max = ordinates.last().unwrap().to_f64();
    let precision = 0.5 * 10f64.powi(-(min_decimals as i32));
    let table = ZeroTable::new(ordinates, precision, ZeroSource::Imported, t_max).map_err(|e| match e {
        Error::InvalidArgument(message) => Error::Parse { line: 1, message },
        other => other,
    })?;
    Ok(table.with_layout(PlainTextLayout {
        lines,
        crlf,
        trailing_newline,
    }))
}

/// Read, validate and spot-audit a zero table.
pub fn import_zero_table(path: &Path, format: ZeroFormat) -> Result<ZeroTable> {
    match format {
        ZeroFormat::PlainText => {
            let text = fs::read_to_string(path)?;
            let table = parse_plain_text(&text)?;
            audit_table(&table)?;
            Ok(table)
        }
    }
}

/// Plain-text rendering; imported tables reproduce their source exactly.
pub fn to_plain_text(table: &ZeroTable) -> String {
    if let Some(layout) = table.layout() {
        let eol = if layout.crlf { "\r\n" } else { "\n" };
        let mut out = layout.lines.join(eol);
        if layout.trailing_newline {
            out.push_str(eol);
        }
        return out;
    }
    let decimals = ((-table.precision().log10()).ceil() as usize + 1).max(MIN_DECIMALS);
    let mut out = String::with_capacity(table.len() * (decimals + 8));
    for g in table.ordinates() {
        out.push_str(&to_fixed_string(*g, decimals));
        out.push('\n');
    }
    out
}

pub fn export_plain_text(table: &ZeroTable, path: &Path) -> Result<()> {
    fs::write(path, to_plain_text(table))?;
    Ok(())
}

/// Write the binary cache: magic, version, count, `(hi, lo)` pairs, then a
/// trailer with coverage bound, precision and source.
pub fn write_cache(table: &ZeroTable, path: &Path) -> Result<()> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * table.len() + TRAILER_LEN);
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&(table.len() as u64).to_le_bytes());
    for g in table.ordinates() {
        buf.extend_from_slice(&g.hi.to_le_bytes());
        buf.extend_from_slice(&g.lo.to_le_bytes());
    }
    buf.extend_from_slice(&table.t_max().to_le_bytes());
    buf.extend_from_slice(&table.precision().to_le_bytes());
    let source: u32 = match table.source() {
        ZeroSource::Computed => 0,
        ZeroSource::Imported => 1,
    };
    buf.extend_from_slice(&source.to_le_bytes());
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<ZeroTable> {
    let bytes = fs::read(path)?;
    let invalid = |reason: String| Error::InvalidCache {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < HEADER_LEN || &bytes[..4] != CACHE_MAGIC {
        return Err(invalid("missing ZTBL header".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let version = u32_at(4);
    let count = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let body = count
        .checked_mul(16)
        .and_then(|b| b.checked_add(HEADER_LEN))
        .ok_or_else(|| invalid(format!("count {count} too large")))?;
    let expected = match version {
        1 => body,
        2 => body + TRAILER_LEN,
        v => return Err(invalid(format!("unsupported version {v}"))),
    };
    if bytes.len() != expected {
        return Err(invalid(format!("size {} bytes, expected {expected}", bytes.len())));
    }
    let ordinates: Vec<Dd> = (0..count)
        .map(|k| {
            let at = HEADER_LEN + 16 * k;
            Dd { hi: f64_at(at), lo: f64_at(at + 8) }
        })
        .collect();
    let (t_max, precision, source) = if version == 2 {
        let source = match u32_at(body + 16) {
            0 => ZeroSource::Computed,
            1 => ZeroSource::Imported,
            s => return Err(invalid(format!("unknown source tag {s}"))),
        };
        (f64_at(body), f64_at(body + 8), source)
    } else {
        let last = ordinates.last().map_or(0.0, |g| g.to_f64());
        (last, f64::EPSILON * last.max(1.0), ZeroSource::Computed)
    };
    ZeroTable::new(ordinates, precision, source, t_max).map_err(|e| invalid(e.to_string()))
}

/// Zeros up to `t_max` from the cache at `path` when it covers the request,
/// otherwise computed and written back.
pub fn cached_find_zeros(path: &Path, t_max: f64, tol: f64) -> Result<ZeroTable> {
    if path.exists() {
        let table = read_cache(path)?;
        if table.t_max() >= t_max && table.precision() <= tol {
            return Ok(table.restricted(t_max));
        }
    }
    let table = find_zeros(t_max, tol)?;
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    write_cache(&table, path)?;
    Ok(table)
}
