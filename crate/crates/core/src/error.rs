use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("{divisor} does not divide {modulus}")]
    NotADivisor { divisor: u64, modulus: u64 },

    #[error("determinant {det} is not a unit modulo {modulus}")]
    NonUnitDeterminant { det: u32, modulus: u32 },

    #[error("element budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },

    #[error("modulus {0} is outside the supported range")]
    ModulusTooLarge(u64),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular model (zero discriminant)")]
    SingularModel,

    #[error("bad reduction at p = {0}")]
    BadReduction(u64),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("record {label} failed validation: {}", reasons.join("; "))]
    Validation { label: String, reasons: Vec<String> },

    #[error("no record labelled {0}")]
    UnknownLabel(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
