use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("residue {a} is not coprime to modulus {q}")]
    InvalidResidue { a: u64, q: u64 },

    #[error("x = {x} exceeds the enumeration ceiling {ceiling}")]
    ThresholdExceeded { x: f64, ceiling: u64 },

    #[error("{count} primes up to y = {y}; at most {max} are supported on the power path")]
    TooManyPrimes { y: f64, count: usize, max: usize },

    #[error("character modulus {chi} does not match query modulus {q}")]
    ModulusMismatch { chi: u64, q: u64 },

    #[error("modulus {q} exceeds the character table bound {max}")]
    ModulusTooLarge { q: u64, max: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Euler factor at p = {p} is within {guard:e} of a pole at s = {re} + {im}i")]
    NearPole {
        p: u64,
        re: f64,
        im: f64,
        guard: f64,
    },

    #[error("saddle point iteration did not converge for x = {x}, y = {y}")]
    NoConvergence { x: f64, y: f64 },

    #[error("k = {k} lies above (log q)/2 = {max}")]
    OutOfRange { k: f64, max: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("JSON error on {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
