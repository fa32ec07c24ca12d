use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use alloc::format;
use alloc::string::{String, ToString};

use super::{APReal, PrecisionContext};
use crate::error::{Error, Result};

/// Arbitrary-precision complex number s = re + i*im.
#[derive(Clone, PartialEq)]
pub struct APComplex {
    pub re: APReal,
    pub im: APReal,
}

impl APComplex {
    pub fn new(re: APReal, im: APReal) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: APReal) -> Self {
        let bits = re.precision();
        Self {
            re,
            im: APReal::zero(bits),
        }
    }

    pub fn zero(bits: usize) -> Self {
        Self::new(APReal::zero(bits), APReal::zero(bits))
    }

    pub fn one(bits: usize) -> Self {
        Self::from_real(APReal::from_i64(1, bits))
    }

    pub fn from_i64(re: i64, im: i64, bits: usize) -> Self {
        Self::new(APReal::from_i64(re, bits), APReal::from_i64(im, bits))
    }

    pub fn from_f64(re: f64, im: f64, bits: usize) -> Self {
        Self::new(APReal::from_f64(re, bits), APReal::from_f64(im, bits))
    }

    /// Parses `a`, `bi`, `a+bi` or `a-bi` (also `j` for the imaginary unit).
    pub fn parse(text: &str, ctx: &PrecisionContext) -> Result<Self> {
        Self::parse_with_bits(text, ctx.binary_precision())
    }

    pub fn parse_with_bits(text: &str, bits: usize) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason| Error::Parse {
            input: text.to_string(),
            reason,
        };
        if s.is_empty() {
            return Err(err("empty complex literal"));
        }
        let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
            return Ok(Self::from_real(APReal::parse_with_bits(&s, bits)?));
        };
        // split at the last sign that is neither leading nor part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re_txt, im_txt) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im_txt = match im_txt {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re = APReal::parse_with_bits(re_txt, bits).map_err(|_| err("malformed real part"))?;
        let im = APReal::parse_with_bits(im_txt, bits).map_err(|_| err("malformed imaginary part"))?;
        Ok(Self::new(re, im))
    }

    /// `re+imi` with each part at `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let re = self.re.to_decimal(digits);
        let im = self.im.to_decimal(digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        Self::new(self.re.with_precision(bits), self.im.with_precision(bits))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> APReal {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> APReal {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &APReal) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    /// Multiplies by i.
    pub fn mul_i(&self) -> Self {
        Self::new(-&self.im, self.re.clone())
    }

    pub fn mul_pow2(&self, k: i32) -> Self {
        Self::new(self.re.mul_pow2(k), self.im.mul_pow2(k))
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Self::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn add_real(&self, r: &APReal) -> Self {
        Self::new(&self.re + r, self.im.clone())
    }

    /// Approximate (re, im) as f64.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// log10|z| without underflow.
    pub fn log10_abs(&self) -> f64 {
        let a = self.re.log10_abs();
        let b = self.im.log10_abs();
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = a.min(b);
        hi + 0.5 * libm::log10(1.0 + libm::pow(10.0, 2.0 * (lo - hi)))
    }
}

impl fmt::Debug for APComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "APComplex({} + {}i)", self.re, self.im)
    }
}

impl fmt::Display for APComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(((self.precision() as f64) * 0.30103) as u32))
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<APComplex> for APComplex {
            type Output = APComplex;
            fn $method(self, rhs: APComplex) -> APComplex {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&APComplex> for APComplex {
            type Output = APComplex;
            fn $method(self, rhs: &APComplex) -> APComplex {
                (&self).$method(rhs)
            }
        }
        impl $trait<APComplex> for &APComplex {
            type Output = APComplex;
            fn $method(self, rhs: APComplex) -> APComplex {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&APComplex> for &APComplex {
    type Output = APComplex;
    fn add(self, rhs: &APComplex) -> APComplex {
        APComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&APComplex> for &APComplex {
    type Output = APComplex;
    fn sub(self, rhs: &APComplex) -> APComplex {
        APComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&APComplex> for &APComplex {
    type Output = APComplex;
    fn mul(self, rhs: &APComplex) -> APComplex {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        APComplex::new(re, im)
    }
}

impl Div<&APComplex> for &APComplex {
    type Output = APComplex;
    fn div(self, rhs: &APComplex) -> APComplex {
        if rhs.im.is_zero() {
            return APComplex::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        let d = rhs.norm_sqr();
        let re = &self.re * &rhs.re + &self.im * &rhs.im;
        let im = &self.im * &rhs.re - &self.re * &rhs.im;
        APComplex::new(re / &d, im / &d)
    }
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for &APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        APComplex::new(-&self.re, -&self.im)
    }
}

impl Neg for APComplex {
    type Output = APComplex;
    fn neg(self) -> APComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITS: usize = 192;

    fn c(text: &str) -> APComplex {
        APComplex::parse_with_bits(text, BITS).unwrap()
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(c("0.5+14.404003i").to_decimal(20), "0.5+14.404003i");
        assert_eq!(c("-3").to_decimal(20), "-3+0i");
        assert_eq!(c("2i").to_decimal(20), "0+2i");
        assert_eq!(c("-1-0.3i").to_decimal(20), "-1-0.3i");
        assert_eq!(c("1e-3-2e+2i").to_decimal(20), "0.001-200i");
        assert_eq!(c("-i").to_decimal(20), "0-1i");
        assert!(APComplex::parse_with_bits("1+2", BITS).is_err());
        assert!(APComplex::parse_with_bits("x+2i", BITS).is_err());
    }

    #[test]
    fn conjugation_is_an_involution() {
        let z = c("0.3+2i");
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = c("0.75+5i");
        let b = c("-2.5+0.125i");
        let q = &(&a * &b) / &b;
        assert!((&q - &a).abs().log10_abs() < -50.0);
    }
}
