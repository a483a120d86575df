use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arithmetic functions are defined for n >= 1 (got range [{lo}, {hi}])")]
    Domain { lo: u64, hi: u64 },

    #[error("segment of {len} values exceeds the configured capacity of {capacity}")]
    SegmentTooLarge { len: u64, capacity: u64 },

    #[error("summatory value overflowed at n = {0}")]
    Overflow(u64),

    #[error("{0}")]
    Degenerate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zeta has a pole at s = 1")]
    Pole,

    #[error("zeta evaluation outside the supported domain at s = {re} + {im}i")]
    ZetaDomain { re: f64, im: f64 },

    #[error("zeta evaluation at height |Im s| = {0} refused (limit 5e6)")]
    HeightRefused(f64),

    #[error("Euler-Maclaurin remainder bound {bound:e} exceeds the target {target:e}")]
    InsufficientAccuracy { bound: f64, target: f64 },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("zero table ordinates not strictly increasing at row {row} (line {line})")]
    NonMonotone { row: usize, line: usize },

    #[error("non-positive ordinate at row {row} (line {line})")]
    NonPositiveGamma { row: usize, line: usize },

    #[error("zeta'(rho) = 0 at row {row} (line {line}): simple-zero assumption violated")]
    SimpleZeroViolation { row: usize, line: usize },

    #[error("index gap at row {row} (line {line}): expected {expected}, found {found}")]
    IndexGap {
        row: usize,
        line: usize,
        expected: u64,
        found: u64,
    },

    #[error("first ordinate {0} outside the sanity window [14.0, 14.2]")]
    FirstOrdinate(f64),

    #[error("invariant violated: {0}")]
    Invariant(String),
}
