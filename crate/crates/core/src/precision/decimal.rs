//! Decimal text <-> binary conversion with exact integer arithmetic.

use alloc::format;
use alloc::string::{String, ToString};
use astro_float::{BigFloat, Sign};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::real::{APReal, RM};
use crate::error::{Error, Result};

/// Exact decimal literal: mantissa * 10^exp10.
pub(crate) struct DecimalLiteral {
    pub mantissa: BigInt,
    pub exp10: i64,
}

fn parse_err(input: &str, reason: &'static str) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason,
    }
}

pub(crate) fn parse_literal(text: &str) -> Result<DecimalLiteral> {
    let s = text.trim();
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut negative = false;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        negative = bytes[i] == b'-';
        i += 1;
    }
    let mut digits = String::new();
    let mut frac_len: i64 = 0;
    let mut seen_point = false;
    while i < bytes.len() {
        match bytes[i] {
            b'0'..=b'9' => {
                digits.push(bytes[i] as char);
                if seen_point {
                    frac_len += 1;
                }
            }
            b'.' if !seen_point => seen_point = true,
            _ => break,
        }
        i += 1;
    }
    if digits.is_empty() {
        return Err(parse_err(text, "expected at least one digit"));
    }
    let mut exp10: i64 = 0;
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        let mut exp_neg = false;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            exp_neg = bytes[i] == b'-';
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(parse_err(text, "malformed exponent"));
        }
        let e: i64 = s[start..i]
            .parse()
            .map_err(|_| parse_err(text, "exponent out of range"))?;
        if e > 1_000_000_000 {
            return Err(parse_err(text, "exponent out of range"));
        }
        exp10 = if exp_neg { -e } else { e };
    }
    if i != bytes.len() {
        return Err(parse_err(text, "unexpected trailing characters"));
    }
    let magnitude: BigUint = digits
        .parse()
        .map_err(|_| parse_err(text, "invalid digits"))?;
    let sign = if negative { BigSign::Minus } else { BigSign::Plus };
    Ok(DecimalLiteral {
        mantissa: BigInt::from_biguint(sign, magnitude),
        exp10: exp10 - frac_len,
    })
}

/// Exact rational value of a decimal literal.
pub(crate) fn parse_decimal_rational(text: &str) -> Result<BigRational> {
    let lit = parse_literal(text)?;
    let ten = BigInt::from(10u32);
    Ok(if lit.exp10 >= 0 {
        BigRational::from_integer(lit.mantissa * Pow::pow(&ten, lit.exp10 as u64))
    } else {
        BigRational::new(lit.mantissa, Pow::pow(&ten, (-lit.exp10) as u64))
    })
}

/// Rounds an exact integer to `bits`.
pub(crate) fn bigint_to_bigfloat(v: &BigInt, bits: usize) -> BigFloat {
    if v.is_zero() {
        return BigFloat::new(bits);
    }
    let (sign, mag) = v.to_u64_digits();
    let e = 64 * mag.len() as i32;
    let mut b = BigFloat::from_words(&mag, if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos }, e);
    let _ = b.set_precision(bits, RM);
    b
}

fn exact_bigfloat(v: &BigInt) -> BigFloat {
    let words = v.magnitude().bits().div_ceil(64).max(1) as usize;
    bigint_to_bigfloat(v, words * 64)
}

pub(crate) fn rational_to_apreal(r: &BigRational, bits: usize) -> APReal {
    let n = exact_bigfloat(r.numer());
    let d = exact_bigfloat(r.denom());
    APReal::from_bf(n.div(&d, bits, RM))
}

pub(crate) fn parse_real(text: &str, bits: usize) -> Result<APReal> {
    let lit = parse_literal(text)?;
    if lit.mantissa.is_zero() {
        return Ok(APReal::zero(bits));
    }
    let ten = BigInt::from(10u32);
    if lit.exp10 >= 0 {
        let v = lit.mantissa * Pow::pow(&ten, lit.exp10 as u64);
        Ok(APReal::from_bf(bigint_to_bigfloat(&v, bits)))
    } else {
        let den = Pow::pow(&ten, (-lit.exp10) as u64);
        let n = exact_bigfloat(&lit.mantissa);
        let d = exact_bigfloat(&den);
        Ok(APReal::from_bf(n.div(&d, bits, RM)))
    }
}

/// Rounds |x| * 10^shift to the nearest integer, ties to even.
fn scaled_round(m: &BigUint, e2: i64, shift: i64) -> BigUint {
    let ten = BigUint::from(10u32);
    let mut num = m.clone();
    let mut den = BigUint::one();
    if shift >= 0 {
        num *= Pow::pow(&ten, shift as u64);
    } else {
        den *= Pow::pow(&ten, (-shift) as u64);
    }
    if e2 >= 0 {
        num <<= e2 as usize;
    } else {
        den <<= (-e2) as usize;
    }
    let (q, r) = num.div_rem(&den);
    let twice = r << 1usize;
    if twice > den || (twice == den && q.is_odd()) {
        q + 1u32
    } else {
        q
    }
}

/// Canonical decimal form: `digits` significant digits, trailing zeros
/// removed, plain notation for exponents in [-7, 21), scientific otherwise.
pub(crate) fn format_real(x: &APReal, digits: u32) -> String {
    let Some((m, e2, negative)) = x.exact_parts() else {
        return "0".to_string();
    };
    let digits = digits.max(1) as i64;
    let ten = BigUint::from(10u32);
    let lower = Pow::pow(&ten, (digits - 1) as u64);
    let upper = &lower * &ten;
    let mut k10 = libm::floor(x.log10_abs()) as i64;
    let q = loop {
        let q = scaled_round(&m, e2, digits - 1 - k10);
        if q >= upper {
            k10 += 1;
        } else if q < lower {
            k10 -= 1;
        } else {
            break q;
        }
    };
    let s = q.to_string();
    let trimmed = s.trim_end_matches('0');
    let sig = if trimmed.is_empty() { "0" } else { trimmed };
    let sign = if negative { "-" } else { "" };
    if !(-7..21).contains(&k10) {
        let (head, tail) = sig.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{k10}")
        } else {
            format!("{sign}{head}.{tail}e{k10}")
        }
    } else if k10 < 0 {
        let zeros = "0".repeat((-k10 - 1) as usize);
        format!("{sign}0.{zeros}{sig}")
    } else {
        let int_len = (k10 + 1) as usize;
        if sig.len() <= int_len {
            let zeros = "0".repeat(int_len - sig.len());
            format!("{sign}{sig}{zeros}")
        } else {
            let (a, b) = sig.split_at(int_len);
            format!("{sign}{a}.{b}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn canonical_strings_round_trip() {
        for s in [
            "1.21164",
            "0",
            "-3",
            "0.5",
            "14.404003",
            "-0.0033333333333333333333333333333333",
            "3.3e-10",
            "1e25",
            "12345678901234567890",
            "1.2345678901234567890123456789e29",
            "0.000001",
            "-1.5e-300",
        ] {
            let x = parse_real(s, 256).unwrap();
            assert_eq!(format_real(&x, 40), s, "round trip of {s}");
        }
    }

    #[test]
    fn rounding_to_requested_digits() {
        let third = APReal::from_ratio(1, 3, 256);
        assert_eq!(format_real(&third, 5), "0.33333");
        let two_thirds = APReal::from_ratio(-2, 3, 256);
        assert_eq!(format_real(&two_thirds, 5), "-0.66667");
        let x = parse_real("9.99996", 256).unwrap();
        assert_eq!(format_real(&x, 5), "10");
    }

    #[test]
    fn malformed_literals_rejected() {
        for s in vec!["1e--5", "", "abc", "1.2.3", "--1", "1e", ".", "1x"] {
            assert!(parse_real(s, 128).is_err(), "{s:?} should fail");
        }
        assert!(parse_real("+.5e+1", 128).is_ok());
    }

    #[test]
    fn exponent_forms_agree() {
        let a = parse_real("1.5e-3", 256).unwrap();
        let b = parse_real("0.0015", 256).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rational_parse_is_exact() {
        let r = parse_decimal_rational("-0.25e1").unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(-5), BigInt::from(2)));
    }
}
