use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("pop target absent: {0}")]
    PopTargetAbsent(String),

    #[error("cone base not a subcomplex: {0}")]
    ConeBaseNotSubcomplex(String),

    #[error("boundary degree {degree} out of range 1..={dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },

    #[error("empty complex")]
    EmptyComplex,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("not a tournament: {0}")]
    NotATournament(String),

    #[error("incomplete reduction: {0}")]
    IncompleteReduction(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
