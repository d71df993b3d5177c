use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision of {digits} digits outside supported range {min}..={max}")]
    InvalidPrecision { digits: u32, min: u32, max: u32 },

    #[error("zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("chi has a pole or zero at s = {re} + {im}i")]
    ChiSingular { re: f64, im: f64 },

    #[error("{op}: argument outside domain ({reason})")]
    Domain { op: &'static str, reason: String },

    #[error("von Mangoldt sieve covers n <= {limit} but {needed} is required")]
    SieveLimitExceeded { needed: u64, limit: u64 },

    #[error("unsupported index {0}")]
    UnsupportedIndex(u32),

    #[error("zero audit failed: {0}")]
    AuditFailure(String),

    #[error("missed zero in ({lo}, {hi}): found {found} sign changes, expected {expected}")]
    MissedZero {
        lo: f64,
        hi: f64,
        found: usize,
        expected: usize,
    },

    #[error("refinement failed near t = {0}")]
    RefinementFailure(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: ordinate {value} does not exceed previous {previous}")]
    MonotonicityViolation {
        line: usize,
        previous: f64,
        value: f64,
    },

    #[error("window upper end {hi} exceeds table coverage {t_max}")]
    OutOfCoverage { hi: f64, t_max: f64 },

    #[error("cannot place contour edge near t = {0}: zero ordinates too close")]
    ZeroTooClose(f64),

    #[error("quadrature did not converge: value {value}, estimated error {est_error:e}")]
    NoConvergence { value: String, est_error: f64 },

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("missing input `{0}`")]
    MissingInput(String),

    #[error("calibration needs at least {needed} grid points, got {got}")]
    InsufficientGrid { needed: usize, got: usize },

    #[error("invalid zero cache {path}: {reason}")]
    InvalidCache { path: PathBuf, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
