use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("tail too slow: exponent p = {0} must exceed 3")]
    TailTooSlow(f64),

    #[error(
        "gas is not dilute: pair cutoff b = {b} does not exceed the scattering length a = {a}"
    )]
    NotDilute { a: f64, b: f64 },

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("statistically inconclusive: {0}")]
    Inconclusive(String),

    #[error("all {0} walkers are stuck (no accepted moves)")]
    WalkersStuck(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_)
            | Error::TailTooSlow(_)
            | Error::NotDilute { .. }
            | Error::Parse(_) => 2,
            Error::NonConvergence(_) | Error::WalkersStuck(_) => 3,
            Error::Inconclusive(_) => 4,
            Error::Io(_) => 1,
        }
    }
}
