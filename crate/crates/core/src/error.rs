use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unrealizable signal profile: {0}")]
    Unrealizable(String),

    #[error("conditioning on a null event: {0}")]
    NullEvent(String),

    #[error("posterior is not monotone in p_doc: {0}")]
    NonMonotone(String),

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    #[error("empty cost interval: c1 = {c1}, c2 = {c2}")]
    EmptyInterval { c1: String, c2: String },

    #[error("closed form disagrees with its defining rule: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Exit code for the CLI: 2 for bad input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::Unrealizable(_)
            | Error::InvalidArgument(_)
            | Error::Parse(_)
            | Error::Infeasible(_)
            | Error::Json(_)
            | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
