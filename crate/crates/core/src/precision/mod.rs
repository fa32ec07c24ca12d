//! Precision contract and arbitrary-precision value types.
//!
//! Values are binary multiprecision floats ([`APReal`], [`APComplex`]) whose
//! working precision is derived from a decimal [`PrecisionContext`]. All
//! rounding is round-to-nearest-even, so a computation repeated under the same
//! context reproduces the same bits.

mod complex;
mod decimal;
mod real;
mod workspace;

pub use complex::APComplex;
pub use real::APReal;
pub use workspace::Workspace;

pub(crate) use decimal::{parse_decimal_rational, rational_to_apreal};

use crate::error::{Error, Result};

/// Smallest accepted number of significant decimal digits.
pub const MIN_DECIMAL_DIGITS: u32 = 30;
/// Extra decimal digits carried internally unless overridden.
pub const DEFAULT_GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = 3.321_928_094_887_362;

/// Requested decimal precision plus guard digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    /// Builds a context with the default guard digits.
    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard_digits(decimal_digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard_digits(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DECIMAL_DIGITS {
            return Err(Error::PrecisionTooLow {
                requested: decimal_digits,
                minimum: MIN_DECIMAL_DIGITS,
            });
        }
        Ok(Self {
            decimal_digits,
            guard_digits,
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Decimal digits carried internally.
    pub fn total_digits(&self) -> u32 {
        self.decimal_digits + self.guard_digits
    }

    /// Internal binary precision, ceil(total_digits * log2 10) rounded up to
    /// whole 64-bit words.
    pub fn binary_precision(&self) -> usize {
        let bits = libm::ceil(self.total_digits() as f64 * LOG2_10) as usize;
        bits.div_ceil(64) * 64
    }

    /// Same guard digits, twice the requested digits.
    pub fn doubled(&self) -> Self {
        Self {
            decimal_digits: self.decimal_digits * 2,
            guard_digits: self.guard_digits,
        }
    }

    pub fn with_digits(&self, decimal_digits: u32) -> Result<Self> {
        Self::with_guard_digits(decimal_digits, self.guard_digits)
    }

    /// Fresh scratch space for evaluations under this context.
    pub fn workspace(&self) -> Workspace {
        Workspace::new(*self, 0)
    }

    /// Parses a signed decimal literal at this context's precision.
    pub fn parse(&self, text: &str) -> Result<APReal> {
        APReal::parse(text, self)
    }

    pub fn parse_complex(&self, text: &str) -> Result<APComplex> {
        APComplex::parse(text, self)
    }

    /// 10^-(decimal_digits - offset) as a base-10 exponent, the form used by
    /// every tolerance in the crate.
    pub fn tol_exp10(&self, offset: i64) -> f64 {
        -(self.decimal_digits as f64 - offset as f64)
    }
}

/// Builds a context, rejecting fewer than [`MIN_DECIMAL_DIGITS`] digits.
pub fn make_context(decimal_digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(decimal_digits)
}

/// Parses `text` into an [`APReal`] rounded to the context precision.
pub fn parse_decimal(text: &str, ctx: &PrecisionContext) -> Result<APReal> {
    APReal::parse(text, ctx)
}
