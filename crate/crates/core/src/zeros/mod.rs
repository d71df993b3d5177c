//! Zero ordinates of zeta on the critical line: computation from sign changes
//! of Hardy's Z, ingestion of published tables, persistence and windowed
//! access.

mod io;
mod scan;

pub use io::{
    cached_find_zeros, export_plain_text, import_zero_table, parse_plain_text, read_cache,
    to_plain_text, write_cache, ZeroFormat, CACHE_MAGIC, CACHE_VERSION,
};
pub use scan::{audit_table, brent_block_count, count_zeros, find_zeros, z_for_sign};

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Distance by which window ends are kept away from ordinates.
pub const BOUNDARY_NUDGE: f64 = 1e-6;

/// Lower bound every stored ordinate must exceed.
pub const MIN_ORDINATE: f64 = 13.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroSource {
    Computed,
    Imported,
}

/// Text layout of an imported plain-text table, kept so that export
/// reproduces the input byte for byte.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct PlainTextLayout {
    pub lines: Vec<String>,
    pub crlf: bool,
    pub trailing_newline: bool,
}

/// Strictly increasing zero ordinates `gamma_k` with a per-ordinate absolute
/// error bound and the height `t_max` up to which the table is complete.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<Dd>,
    precision: f64,
    source: ZeroSource,
    t_max: f64,
    layout: Option<PlainTextLayout>,
}

impl ZeroTable {
    pub fn new(ordinates: Vec<Dd>, precision: f64, source: ZeroSource, t_max: f64) -> Result<Self> {
        validate(&ordinates, t_max)?;
        if !(precision.is_finite() && precision > 0.0) {
            return Err(Error::InvalidArgument(format!("precision {precision} must be positive")));
        }
        Ok(ZeroTable {
            ordinates,
            precision,
            source,
            t_max,
            layout: None,
        })
    }

    pub(crate) fn with_layout(mut self, layout: PlainTextLayout) -> Self {
        self.layout = Some(layout);
        self
    }

    pub(crate) fn layout(&self) -> Option<&PlainTextLayout> {
        self.layout.as_ref()
    }

    pub fn ordinates(&self) -> &[Dd] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Number of stored ordinates `gamma <= t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.ordinates.partition_point(|g| *g <= Dd::from_f64(t))
    }

    /// The same table with coverage cut back to `t_max`.
    pub fn restricted(&self, t_max: f64) -> ZeroTable {
        if t_max >= self.t_max {
            return self.clone();
        }
        let n = self.count_below(t_max);
        ZeroTable {
            ordinates: self.ordinates[..n].to_vec(),
            precision: self.precision,
            source: self.source,
            t_max,
            layout: None,
        }
    }

    /// The ordinates in `(lo, hi]`, with both ends moved away from nearby
    /// ordinates without changing membership.
    pub fn window(&self, lo: f64, hi: f64) -> Result<ZeroWindow<'_>> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!("window ({lo}, {hi}] is not finite")));
        }
        if hi > self.t_max {
            return Err(Error::OutOfCoverage { hi, t_max: self.t_max });
        }
        if lo >= hi {
            let at = self.count_below(hi);
            return Ok(ZeroWindow {
                table: self,
                lo,
                hi: lo,
                start: at,
                end: at,
            });
        }
        let start = self.count_below(lo);
        let end = self.count_below(hi);
        let end = end.max(start);
        Ok(ZeroWindow {
            table: self,
            lo: self.nudge(lo, start),
            hi: self.nudge(hi, end),
            start,
            end,
        })
    }

    /// Move `x` at least `BOUNDARY_NUDGE` from the ordinates on either side
    /// of the split index `k` (`gamma_{k-1} <= x < gamma_k`).
    fn nudge(&self, x: f64, k: usize) -> f64 {
        let mut y = x;
        if k > 0 {
            let below = self.ordinates[k - 1].to_f64();
            if y - below < BOUNDARY_NUDGE {
                y = below + BOUNDARY_NUDGE;
            }
        }
        if let Some(above) = self.ordinates.get(k) {
            let above = above.to_f64();
            if above - y < BOUNDARY_NUDGE {
                y = above - BOUNDARY_NUDGE;
            }
        }
        y
    }
}

fn validate(ordinates: &[Dd], t_max: f64) -> Result<()> {
    if !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("coverage bound {t_max} is not finite")));
    }
    for (i, g) in ordinates.iter().enumerate() {
        if !(g.to_f64() > MIN_ORDINATE) {
            return Err(Error::InvalidArgument(format!(
                "ordinate {} at index {i} is not above {MIN_ORDINATE}",
                g.to_f64()
            )));
        }
        if i > 0 && !(ordinates[i - 1] < *g) {
            return Err(Error::MonotonicityViolation {
                line: i + 1,
                previous: ordinates[i - 1].to_f64(),
                value: g.to_f64(),
            });
        }
    }
    if let Some(last) = ordinates.last() {
        if last.to_f64() > t_max {
            return Err(Error::InvalidArgument(format!(
                "ordinate {} beyond coverage bound {t_max}",
                last.to_f64()
            )));
        }
    }
    Ok(())
}

/// The ordinates of a table with `lo < gamma <= hi`.
#[derive(Clone, Copy, Debug)]
pub struct ZeroWindow<'a> {
    table: &'a ZeroTable,
    lo: f64,
    hi: f64,
    start: usize,
    end: usize,
}

impl<'a> ZeroWindow<'a> {
    pub fn table(&self) -> &'a ZeroTable {
        self.table
    }

    /// Lower end after nudging.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper end after nudging.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn ordinates(&self) -> &'a [Dd] {
        &self.table.ordinates[self.start..self.end]
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn iter(&self) -> impl Iterator<Item = Dd> + 'a {
        self.ordinates().iter().copied()
    }
}
