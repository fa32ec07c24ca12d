use alloc::vec::Vec;
use astro_float::{BigFloat, Consts};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::decimal::rational_to_apreal;
use super::real::RM;
use super::{APComplex, APReal, PrecisionContext};
use crate::specfun::bernoulli;

/// Scratch state for one evaluation: working precision, the constants cache
/// required by the transcendental kernels, and Bernoulli-derived coefficient
/// tables rounded to the working precision.
///
/// A workspace is cheap to create and is not shared between threads.
pub struct Workspace {
    ctx: PrecisionContext,
    bits: usize,
    cc: Consts,
    pi: Option<APReal>,
    ln_5_over_pi: Option<APReal>,
    half_ln_2pi: Option<APReal>,
    em: Vec<APReal>,
    stirling: Vec<APReal>,
    psi: Vec<APReal>,
}

impl Workspace {
    pub fn new(ctx: PrecisionContext, extra_bits: usize) -> Self {
        let bits = (ctx.binary_precision() + extra_bits).div_ceil(64) * 64;
        Self {
            ctx,
            bits,
            cc: Consts::new().expect("constants cache allocation"),
            pi: None,
            ln_5_over_pi: None,
            half_ln_2pi: None,
            em: Vec::new(),
            stirling: Vec::new(),
            psi: Vec::new(),
        }
    }

    /// A workspace at the same context carrying `extra_bits` more.
    pub fn widened(&self, extra_bits: usize) -> Self {
        Self::new(self.ctx, self.bits - self.ctx.binary_precision() + extra_bits)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn int(&self, v: i64) -> APReal {
        APReal::from_i64(v, self.bits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> APReal {
        APReal::from_ratio(num, den, self.bits)
    }

    pub fn cint(&self, re: i64, im: i64) -> APComplex {
        APComplex::from_i64(re, im, self.bits)
    }

    pub fn creal(&self, re: &APReal) -> APComplex {
        APComplex::new(re.with_precision(self.bits), APReal::zero(self.bits))
    }

    /// Rounds a value to the working precision.
    pub fn round(&self, x: &APReal) -> APReal {
        x.with_precision(self.bits)
    }

    pub fn cround(&self, z: &APComplex) -> APComplex {
        z.with_precision(self.bits)
    }

    pub fn pi(&mut self) -> APReal {
        if self.pi.is_none() {
            self.pi = Some(APReal::from_bf(self.cc.pi(self.bits, RM)));
        }
        self.pi.clone().unwrap()
    }

    /// ln(5/pi), the log of the power base in X(s).
    pub fn ln_5_over_pi(&mut self) -> APReal {
        if self.ln_5_over_pi.is_none() {
            let q = &self.int(5) / &self.pi();
            self.ln_5_over_pi = Some(self.ln(&q));
        }
        self.ln_5_over_pi.clone().unwrap()
    }

    /// ln(2 pi) / 2.
    pub fn half_ln_2pi(&mut self) -> APReal {
        if self.half_ln_2pi.is_none() {
            let two_pi = self.pi().mul_pow2(1);
            self.half_ln_2pi = Some(self.ln(&two_pi).mul_pow2(-1));
        }
        self.half_ln_2pi.clone().unwrap()
    }

    pub fn exp(&mut self, x: &APReal) -> APReal {
        APReal::from_bf(x.0.exp(self.bits, RM, &mut self.cc))
    }

    /// Natural log of a positive value.
    pub fn ln(&mut self, x: &APReal) -> APReal {
        debug_assert!(x.is_positive());
        APReal::from_bf(x.0.ln(self.bits, RM, &mut self.cc))
    }

    pub fn sin(&mut self, x: &APReal) -> APReal {
        APReal::from_bf(x.0.sin(self.bits, RM, &mut self.cc))
    }

    pub fn cos(&mut self, x: &APReal) -> APReal {
        APReal::from_bf(x.0.cos(self.bits, RM, &mut self.cc))
    }

    pub fn atan(&mut self, x: &APReal) -> APReal {
        APReal::from_bf(x.0.atan(self.bits, RM, &mut self.cc))
    }

    pub fn sqrt(&self, x: &APReal) -> APReal {
        APReal::from_bf(x.0.sqrt(self.bits, RM))
    }

    /// Principal argument of x + iy in (-pi, pi]; atan2(+0, x<0) = pi.
    pub fn atan2(&mut self, y: &APReal, x: &APReal) -> APReal {
        if x.is_zero() {
            if y.is_zero() {
                return APReal::zero(self.bits);
            }
            let half_pi = self.pi().mul_pow2(-1);
            return if y.is_negative() { -half_pi } else { half_pi };
        }
        if y.is_zero() {
            return if x.is_negative() {
                self.pi()
            } else {
                APReal::zero(self.bits)
            };
        }
        // use the quotient below 1 in magnitude for the atan argument
        if y.abs_cmp(x) == core::cmp::Ordering::Greater {
            let half_pi = self.pi().mul_pow2(-1);
            let a = self.atan(&(x / y));
            if y.is_positive() {
                half_pi - a
            } else {
                -half_pi - a
            }
        } else {
            let a = self.atan(&(y / x));
            if x.is_positive() {
                a
            } else if y.is_positive() {
                a + self.pi()
            } else {
                a - self.pi()
            }
        }
    }

    pub fn cexp(&mut self, z: &APComplex) -> APComplex {
        let m = self.exp(&z.re);
        if z.im.is_zero() {
            return APComplex::new(m, APReal::zero(self.bits));
        }
        let c = self.cos(&z.im);
        let s = self.sin(&z.im);
        APComplex::new(&m * &c, &m * &s)
    }

    /// Principal logarithm, imaginary part in (-pi, pi].
    pub fn cln(&mut self, z: &APComplex) -> APComplex {
        let re = if z.im.is_zero() {
            self.ln(&z.re.abs())
        } else {
            self.ln(&z.norm_sqr()).mul_pow2(-1)
        };
        let im = self.atan2(&z.im, &z.re);
        APComplex::new(re, im)
    }

    /// ln|z| only.
    pub fn ln_abs(&mut self, z: &APComplex) -> APReal {
        if z.im.is_zero() {
            self.ln(&z.re.abs())
        } else {
            self.ln(&z.norm_sqr()).mul_pow2(-1)
        }
    }

    /// base^(-s) given ln(base) for a positive real base.
    pub fn pow_neg_s(&mut self, ln_base: &APReal, s: &APComplex) -> APComplex {
        let mag = self.exp(&-(&s.re * ln_base));
        if s.im.is_zero() {
            return APComplex::new(mag, APReal::zero(self.bits));
        }
        let ang = &s.im * ln_base;
        let c = self.cos(&ang);
        let sn = self.sin(&ang);
        APComplex::new(&mag * &c, -(&mag * &sn))
    }

    /// 10^k as an APReal, exact for k >= 0.
    pub fn pow10(&self, k: i64) -> APReal {
        let ten = BigFloat::from_i64(10, self.bits);
        let p = ten.powi(k.unsigned_abs() as usize, self.bits, RM);
        let v = APReal::from_bf(p);
        if k >= 0 {
            v
        } else {
            v.recip()
        }
    }

    fn fill(&mut self, k: usize) {
        while self.em.len() < k {
            let j = self.em.len() + 1;
            let b = bernoulli::bernoulli(2 * j);
            let two_j = BigInt::from(2 * j);
            let fact: BigInt = (2..=2 * j).map(BigInt::from).product();
            let stirling_den = &two_j * (&two_j - 1);
            self.em.push(rational_to_apreal(&(&b / BigRational::from_integer(fact)), self.bits));
            self.stirling
                .push(rational_to_apreal(&(&b / BigRational::from_integer(stirling_den)), self.bits));
            self.psi
                .push(rational_to_apreal(&(&b / BigRational::from_integer(two_j)), self.bits));
        }
    }

    /// B_2k / (2k)!, k >= 1: Euler-Maclaurin weights.
    pub fn em_coeff(&mut self, k: usize) -> APReal {
        self.fill(k);
        self.em[k - 1].clone()
    }

    /// B_2k / (2k (2k - 1)), k >= 1: Stirling series for log-gamma.
    pub fn stirling_coeff(&mut self, k: usize) -> APReal {
        self.fill(k);
        self.stirling[k - 1].clone()
    }

    /// B_2k / (2k), k >= 1: asymptotic series for digamma.
    pub fn psi_coeff(&mut self, k: usize) -> APReal {
        self.fill(k);
        self.psi[k - 1].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws() -> Workspace {
        PrecisionContext::new(40).unwrap().workspace()
    }

    #[test]
    fn atan2_quadrants() {
        let mut w = ws();
        let pi = w.pi().to_f64();
        let cases = [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0), (3.0, 0.5), (-0.5, -3.0), (0.0, -2.0)];
        for (y, x) in cases {
            let a = w.atan2(&APReal::from_f64(y, 192), &APReal::from_f64(x, 192));
            assert!((a.to_f64() - libm::atan2(y, x)).abs() < 1e-14, "atan2({y},{x})");
        }
        let a = w.atan2(&APReal::zero(192), &APReal::from_i64(-2, 192));
        assert!((a.to_f64() - pi).abs() < 1e-15);
    }

    #[test]
    fn complex_log_inverts_exp() {
        let mut w = ws();
        let z = APComplex::parse_with_bits("0.3-2.5i", w.bits()).unwrap();
        let l = w.cln(&z);
        let back = w.cexp(&l);
        assert!((&back - &z).abs().log10_abs() < -45.0);
    }

    #[test]
    fn pow10_negative() {
        let w = ws();
        let x = w.pow10(-20);
        assert!((x.log10_abs() + 20.0).abs() < 1e-12);
    }
}
