use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what}: no convergence after {iterations} iterations (matrix {rows}x{cols})")]
    NonConvergence {
        what: &'static str,
        rows: usize,
        cols: usize,
        iterations: usize,
    },

    #[error("matrix is not positive definite: nonpositive pivot {pivot} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("singular factor: zero pivot at row {row}")]
    SingularFactor { row: usize },

    #[error("matrix is not symmetric: |K[{row},{col}] - K[{col},{row}]| = {gap}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("entry ({row},{col}) lies outside the declared bandwidth {bandwidth}")]
    OutsideBand {
        row: usize,
        col: usize,
        bandwidth: usize,
    },

    #[error("rank deficient: smallest singular value {smallest:e} (largest {largest:e})")]
    RankDeficient { smallest: f64, largest: f64 },

    #[error("non-finite value in {context} at iteration {iteration}")]
    NotFinite {
        context: &'static str,
        iteration: usize,
    },

    #[error("alpha calibration exhausted bracket [{lo}, {hi}]; best variance ratio {best_ratio}")]
    BracketExhausted { lo: f64, hi: f64, best_ratio: f64 },

    #[error("zero vector in {0}")]
    ZeroVector(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem too large for dense {what}: n = {n}, limit {limit}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("malformed PGM: {0}")]
    Pgm(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
