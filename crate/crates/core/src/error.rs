use std::fmt;

use crate::lp::LpStatus;

pub type Result<T> = std::result::Result<T, Error>;

/// Where in a CSV document a parse error was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    /// 1-based line number, header included.
    pub line: Option<usize>,
    pub column: Option<String>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.column) {
            (Some(line), Some(col)) => write!(f, "line {line}, column '{col}'"),
            (Some(line), None) => write!(f, "line {line}"),
            (None, Some(col)) => write!(f, "column '{col}'"),
            (None, None) => write!(f, "input"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The LP itself is ill-formed (ragged rows, NaN, negative bounds).
    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    /// The simplex loop hit its iteration cap.
    #[error("simplex iteration limit ({0}) exceeded")]
    IterationLimit(usize),

    /// A value lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: Location, message: String },

    /// Schema or run configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An efficiency LP did not reach an optimum.
    #[error("{context}: solver reported {status:?}")]
    Solver { context: String, status: LpStatus },
}

impl Error {
    pub(crate) fn parse(line: Option<usize>, column: Option<&str>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: Location {
                line,
                column: column.map(str::to_owned),
            },
            message: message.into(),
        }
    }
}
