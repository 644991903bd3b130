use std::path::PathBuf;

use crate::Hand;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid UTF-8 at byte {position}")]
    InvalidEncoding { position: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("n-gram order must be 1, 2 or 3 (got {0})")]
    InvalidOrder(usize),

    #[error("invalid n-gram table: {0}")]
    InvalidTable(String),

    #[error("letter {} has no digraph involvement", crate::codepoint::format(*.0))]
    NoInvolvement(char),

    #[error("too few letters: need at least 4 ranked letters, found {found}")]
    TooFewLetters { found: usize },

    #[error("letter {} is already assigned", crate::codepoint::format(*.0))]
    AlreadyAssigned(char),

    #[error("{hand} hand capacity exceeded by {overflow} letter(s)")]
    CapacityExceeded { hand: Hand, overflow: usize },

    #[error("malformed layout at line {line}, column {column}: {reason}")]
    MalformedLayout {
        reason: String,
        line: usize,
        column: usize,
    },

    #[error("layout invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed {what}: {reason}")]
    Malformed { what: &'static str, reason: String },

    #[error("empty input")]
    EmptyInput,

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable identifier used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidEncoding { .. } => "InvalidEncoding",
            Error::Config(_) => "Config",
            Error::EmptyCorpus => "EmptyCorpus",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::InvalidTable(_) => "InvalidTable",
            Error::NoInvolvement(_) => "NoInvolvement",
            Error::TooFewLetters { .. } => "TooFewLetters",
            Error::AlreadyAssigned(_) => "AlreadyAssigned",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::MalformedLayout { .. } => "MalformedLayout",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::Malformed { .. } => "Malformed",
            Error::EmptyInput => "EmptyInput",
            Error::Io { .. } => "Io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
