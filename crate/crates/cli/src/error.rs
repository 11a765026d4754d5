use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] edgeflow::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: edgeflow::io::ParseError,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Io { .. } => "io",
            CliError::Parse { source, .. } => source.code(),
            CliError::Usage(_) => "usage",
        }
    }
}

impl From<edgeflow::filters::FilterError> for CliError {
    fn from(e: edgeflow::filters::FilterError) -> Self {
        CliError::Lib(e.into())
    }
}

impl From<edgeflow::flowgen::FlowgenError> for CliError {
    fn from(e: edgeflow::flowgen::FlowgenError) -> Self {
        CliError::Lib(e.into())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
