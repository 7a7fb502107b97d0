use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds 65536")]
    TooLarge(u32),
    #[error("budget exceeded for {what}: need {required}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("matroid has a loop; the critical number is undefined")]
    LoopPresent,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("budget exceeded in trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn budget(what: &'static str, required: u128, limit: u128) -> Error {
        Error::BudgetExceeded {
            what,
            required,
            limit,
        }
    }

    /// True for budget exhaustion, including when wrapped with a trial index.
    pub fn is_budget(&self) -> bool {
        match self {
            Error::BudgetExceeded { .. } => true,
            Error::Trial { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
