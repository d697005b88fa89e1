use std::fmt;

use serde::Serialize;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Certificate returned when the stuck cells cannot all be matched.
///
/// `defects` lists coordinates whose masking equations sum to `0 = 1`,
/// so no parity vector can satisfy all of them at once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaskingFailure {
    pub defects: Vec<usize>,
}

impl fmt::Display for MaskingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot mask stuck cells {:?} simultaneously", self.defects)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("{what} needs 2^{needed} enumeration steps, above the cap of 2^{cap}")]
    Capacity { what: &'static str, needed: u32, cap: u32 },
    #[error("masking failure: {0}")]
    Masking(MaskingFailure),
    #[error("coordinate {0} is not covered by any dual codeword")]
    Unrepairable(usize),
    #[error("invalid input: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    /// Errors caused by malformed input rather than by the coding problem itself.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Dimension(_) | Error::Usage(_) | Error::Parse(_))
    }
}
