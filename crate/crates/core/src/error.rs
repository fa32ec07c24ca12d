use alloc::string::String;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("requested precision of {requested} decimal digits is below the minimum of {minimum}")]
    PrecisionTooLow { requested: u32, minimum: u32 },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },

    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("tolerance {0} is tighter than the method can certify")]
    TolTooTight(String),

    #[error("s = {0} is excluded from evaluation")]
    ExcludedPoint(String),

    #[error("X(s) has a pole at s = {0}")]
    PoleOfX(String),

    #[error("division by a value below the floor: {0}")]
    DivideByZero(String),

    #[error("|f'(s)| = {magnitude} underflows at s = {at}")]
    DerivativeUnderflow { at: String, magnitude: String },

    #[error("no sign change of the target function in {0}")]
    NoRootInBracket(String),

    #[error("target accuracy unreachable: {0}")]
    PrecisionUnreachable(String),
}

pub type Result<T> = core::result::Result<T, Error>;
