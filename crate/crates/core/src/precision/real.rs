use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use alloc::string::String;
use astro_float::{BigFloat, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};

use super::decimal;
use super::PrecisionContext;
use crate::error::Result;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

const LOG10_2: f64 = 0.301_029_995_663_981_2;

/// Arbitrary-precision real number.
///
/// Binary operators round to the larger of the operand precisions.
#[derive(Clone)]
pub struct APReal(pub(crate) BigFloat);

impl APReal {
    pub(crate) fn from_bf(b: BigFloat) -> Self {
        debug_assert!(!b.is_nan(), "NaN escaped into APReal");
        APReal(b)
    }

    pub fn zero(bits: usize) -> Self {
        APReal(BigFloat::new(bits))
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        APReal(BigFloat::from_i64(v, bits))
    }

    /// Exactly rounded num/den.
    pub fn from_ratio(num: i64, den: i64, bits: usize) -> Self {
        let n = BigFloat::from_i64(num, bits);
        let d = BigFloat::from_i64(den, bits);
        APReal(n.div(&d, bits, RM))
    }

    /// Rounds an exact integer to `bits`.
    pub fn from_bigint(v: &BigInt, bits: usize) -> Self {
        APReal(decimal::bigint_to_bigfloat(v, bits))
    }

    pub fn from_f64(v: f64, bits: usize) -> Self {
        APReal(BigFloat::from_f64(v, bits))
    }

    pub fn parse(text: &str, ctx: &PrecisionContext) -> Result<Self> {
        decimal::parse_real(text, ctx.binary_precision())
    }

    /// Parses at an explicit binary precision.
    pub fn parse_with_bits(text: &str, bits: usize) -> Result<Self> {
        decimal::parse_real(text, bits)
    }

    /// Canonical decimal form rounded to `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        decimal::format_real(self, digits)
    }

    /// Canonical decimal form at the context's requested digits.
    pub fn to_decimal_ctx(&self, ctx: &PrecisionContext) -> String {
        self.to_decimal(ctx.decimal_digits())
    }

    pub fn precision(&self) -> usize {
        self.0.precision().unwrap_or(64)
    }

    /// Rounds to `bits` of precision.
    pub fn with_precision(&self, bits: usize) -> Self {
        let mut b = self.0.clone();
        // only fails for invalid precisions, which `bits` never is here
        let _ = b.set_precision(bits, RM);
        APReal(b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_positive()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_int()
    }

    pub fn abs(&self) -> Self {
        APReal(self.0.abs())
    }

    pub fn floor(&self) -> Self {
        APReal(self.0.floor())
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Self {
        APReal(self.0.sqrt(self.precision(), RM))
    }

    pub fn recip(&self) -> Self {
        APReal(self.0.reciprocal(self.precision(), RM))
    }

    /// Multiplies by 2^k exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut b = self.0.clone();
        if let Some(e) = b.exponent() {
            b.set_exponent(e + k);
        }
        APReal(b)
    }

    pub fn max_abs<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self.abs_cmp(other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn abs_cmp(&self, other: &Self) -> Ordering {
        match self.0.abs_cmp(&other.0) {
            Some(c) if c < 0 => Ordering::Less,
            Some(c) if c > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Nearest f64; saturates to 0 or infinity outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        match self.0.as_raw_parts() {
            Some((words, _, sign, e, _)) if !words.is_empty() && !self.is_zero() => {
                let top = words[words.len() - 1] as f64;
                let next = if words.len() > 1 {
                    words[words.len() - 2] as f64 / 18_446_744_073_709_551_616.0
                } else {
                    0.0
                };
                let m = (top + next) / 18_446_744_073_709_551_616.0;
                let v = libm::ldexp(m, e);
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            _ => 0.0,
        }
    }

    /// log10|x| without underflow; -inf for zero.
    pub fn log10_abs(&self) -> f64 {
        match self.0.as_raw_parts() {
            Some((words, _, _, e, _)) if !words.is_empty() && !self.is_zero() => {
                let top = words[words.len() - 1] as f64 / 18_446_744_073_709_551_616.0;
                libm::log10(top) + e as f64 * LOG10_2
            }
            _ => f64::NEG_INFINITY,
        }
    }

    /// Mantissa words, exponent and sign; the value is 0.m * 2^e.
    pub(crate) fn raw_parts(&self) -> Option<(&[u64], i32, bool)> {
        if self.is_zero() {
            return None;
        }
        self.0
            .as_raw_parts()
            .map(|(m, _, s, e, _)| (m, e, s == Sign::Neg))
    }

    /// Exact integer value of the mantissa and its binary exponent:
    /// |x| = m * 2^e2.
    pub(crate) fn exact_parts(&self) -> Option<(BigUint, i64, bool)> {
        let (words, e, neg) = self.raw_parts()?;
        let m = BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<alloc::vec::Vec<u32>>(),
        );
        Some((m, e as i64 - 64 * words.len() as i64, neg))
    }
}

impl PartialEq for APReal {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for APReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for APReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "APReal({})", self)
    }
}

impl fmt::Display for APReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.precision() as f64 * LOG10_2) as u32;
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

fn prec2(a: &APReal, b: &APReal) -> usize {
    a.precision().max(b.precision())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait<&APReal> for &APReal {
            type Output = APReal;
            fn $method(self, rhs: &APReal) -> APReal {
                APReal(self.0.$op(&rhs.0, prec2(self, rhs), RM))
            }
        }
        impl $trait<APReal> for APReal {
            type Output = APReal;
            fn $method(self, rhs: APReal) -> APReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&APReal> for APReal {
            type Output = APReal;
            fn $method(self, rhs: &APReal) -> APReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<APReal> for &APReal {
            type Output = APReal;
            fn $method(self, rhs: APReal) -> APReal {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for &APReal {
    type Output = APReal;
    fn neg(self) -> APReal {
        APReal(BigFloat::neg(&self.0))
    }
}

impl Neg for APReal {
    type Output = APReal;
    fn neg(self) -> APReal {
        APReal(BigFloat::neg(&self.0))
    }
}
