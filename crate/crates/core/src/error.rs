use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid modulus {p}: {reason}")]
    InvalidModulus { p: u64, reason: &'static str },

    #[error("{0} is zero, but a nonzero residue is required")]
    ZeroResidue(&'static str),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("cannot parse {what} `{input}`: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("budget exceeded: {required} evaluations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("modulus {p} exceeds the convolution limit {limit}")]
    ConvolutionLimit { p: u64, limit: u64 },

    #[error("weight {index} has modulus {modulus} > 1")]
    WeightOutOfRange { index: usize, modulus: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no crossover: {0}")]
    NoCrossover(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("unknown {kind} `{name}`; expected one of: {known}")]
    Unknown {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(what: &'static str, input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}
