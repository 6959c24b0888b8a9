use thiserror::Error;

/// Error type shared by every module.
///
/// The CLI maps these onto exit codes: parameter/precondition/parse problems
/// are usage errors (2), exhausted budgets and retry caps are resource errors
/// (3), and invariant violations are verification failures (1).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("retry cap exhausted: {0}")]
    RetryExhausted(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Precondition(_) | Error::Parse(_) => 2,
            Error::Budget(_) | Error::RetryExhausted(_) => 3,
            Error::Invariant(_) => 1,
            Error::Io(_) | Error::Json(_) => 2,
        }
    }
}
