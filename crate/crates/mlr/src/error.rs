//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x},{y}) is off the grid [1,{m}]x[1,{m}]")]
    OffGrid { x: u32, y: u32, m: u32 },

    #[error("coordinate {value} out of range [1,{m}]")]
    OffGridCoord { value: u32, m: u32 },

    #[error("duplicate {axis}-coordinate {value}; coordinates must be distinct per axis")]
    DuplicateCoordinate { axis: char, value: u32 },

    #[error("query [{a},{b}]x(-inf,{d}] is invalid on grid [1,{m}]: {reason}")]
    InvalidQuery {
        a: u32,
        b: u32,
        d: u32,
        m: u32,
        reason: &'static str,
    },

    #[error("keys must be strictly ascending")]
    NotAscending,

    #[error("empty input")]
    EmptyInput,

    #[error("sequence of {len} keys exceeds capacity {cap}")]
    CapacityExceeded { len: usize, cap: usize },

    #[error("prefix length {r} out of bounds for sequence of length {len}")]
    PrefixOutOfBounds { r: usize, len: usize },

    #[error("sequence of length {len} is not a permutation of 1..={len}")]
    NotAPermutation { len: usize },

    #[error("microtree capacity {k} exceeds tabulation cutoff {k_tab}; use the scan fallback")]
    TabulationTooLarge { k: usize, k_tab: usize },

    #[error("no point with x-coordinate {x}")]
    PointNotFound { x: u32 },

    #[error("workload cannot place {n} distinct coordinates: {reason}")]
    Workload { n: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bad file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
