use thiserror::Error;

use crate::filters::FilterError;
use crate::flowgen::FlowgenError;
use crate::graph::GraphError;
use crate::io::ParseError;
use crate::spectral::SpectralError;

/// Crate-wide error. Every variant maps to a stable machine-readable name via
/// [`Error::code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Flowgen(#[from] FlowgenError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{what}: expected length {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("invalid parameter grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Graph(e) => e.code(),
            Error::Spectral(e) => e.code(),
            Error::Filter(e) => e.code(),
            Error::Flowgen(e) => e.code(),
            Error::Parse(e) => e.code(),
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidGrid(_) => "invalid_grid",
        }
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            actual,
        })
    }
}
