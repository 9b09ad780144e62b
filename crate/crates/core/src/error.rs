use std::path::PathBuf;

use thiserror::Error;

use crate::dem::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes disagree. Always a caller bug.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// The right-hand side lies outside the column space of the matrix.
    #[error("syndrome is not in the column space of the check matrix")]
    Unsolvable,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{}: {source}", path.display())]
    DemFile {
        path: PathBuf,
        #[source]
        source: ParseError,
    },

    /// A decoder failed on one shot of an experiment.
    #[error("shot {shot}: {source}")]
    Shot {
        shot: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn value(msg: impl Into<String>) -> Self {
        Error::InvalidValue(msg.into())
    }
}
