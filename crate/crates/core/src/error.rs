use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit must be at least 1")]
    ZeroSieveLimit,
    #[error("cannot allocate a table of {0} entries")]
    Resource(usize),
    #[error("argument {x} is beyond the available range (limit {limit})")]
    OutOfRange { x: f64, limit: f64 },
    #[error("exact mode is capped at floor(x) <= {cap}, got {x}")]
    ExactCapExceeded { x: u64, cap: u64 },
    #[error("index {k} outside the table range 0..={kmax}")]
    KOutOfRange { k: usize, kmax: usize },
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("derivative at the integer point {0} needs an explicit side")]
    IntegerPoint(f64),
    #[error("singular linear system of order {0}")]
    Singular(usize),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("duplicate support key {0}")]
    DuplicateKey(u64),
    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },
    #[error("integral appears to diverge (increment ratio {ratio:.3})")]
    Divergent { ratio: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sieve cache: {0}")]
    CacheFormat(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
