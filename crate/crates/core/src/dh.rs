//! The Davenport-Heilbronn function
//!
//!   f(s) = 5^-s [zeta(s,1/5) + T zeta(s,2/5) - T zeta(s,3/5) - zeta(s,4/5)],
//!   T = (sqrt(10 - 2 sqrt 5) - 2) / (sqrt 5 - 1),
//!
//! the factor X(s) of its functional equation f(s) = X(s) f(1-s),
//!
//!   X(s) = exp[(1/2 - s) ln(5/pi) + ln Gamma(1 - s/2) - ln Gamma((1 + s)/2)],
//!
//! and the real rotation Z(t) of f on the critical line.
//!
//! Written as a Dirichlet series, f(s) = sum_m chi(m) m^-s with chi(m)
//! depending on m mod 5 through the weights (0, 1, T, -T, -1). [`f_eval`] sums
//! that series directly below 5N, with every m^-s for composite m built
//! from a prime factorisation, and closes each residue class with an
//! Euler-Maclaurin tail.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::precision::{rational_to_apreal, APComplex, APReal, PrecisionContext, Workspace};
use crate::specfun::bernoulli::bernoulli_polynomial;
use crate::specfun::gamma::{digamma_in, ln_abs_gamma_in, log_gamma_in};
use crate::specfun::hurwitz::{self, em_tail, hurwitz_in, SeriesValue};

/// Fixed constants of f: the shifts k/5 and their signs.
#[derive(Debug, Clone)]
pub struct DHParameters {
    pub tan_theta: APReal,
    /// Numerators k of the Hurwitz shifts k/5.
    pub shifts: [i64; 4],
    /// Coefficient of each shift, as a multiple of 1 or tan theta.
    pub signs: [(i64, bool); 4],
}

impl DHParameters {
    pub fn new(ctx: &PrecisionContext) -> Self {
        Self {
            tan_theta: tan_theta(ctx),
            shifts: [1, 2, 3, 4],
            signs: [(1, false), (1, true), (-1, true), (-1, false)],
        }
    }

    /// Weight of zeta(s, k/5) in f.
    pub fn coefficient(&self, index: usize) -> APReal {
        let (sign, uses_t) = self.signs[index];
        let bits = self.tan_theta.precision();
        let base = if uses_t {
            self.tan_theta.clone()
        } else {
            APReal::from_i64(1, bits)
        };
        if sign < 0 {
            -base
        } else {
            base
        }
    }
}

pub(crate) fn tan_theta_in(ws: &Workspace) -> APReal {
    let sqrt5 = ws.sqrt(&ws.int(5));
    let inner = ws.sqrt(&(ws.int(10) - sqrt5.mul_pow2(1)));
    (inner - ws.int(2)) / (sqrt5 - ws.int(1))
}

/// tan theta = (sqrt(10 - 2 sqrt 5) - 2) / (sqrt 5 - 1).
pub fn tan_theta(ctx: &PrecisionContext) -> APReal {
    let ws = ctx.workspace();
    tan_theta_in(&ws)
}

/// Exact real integer value of s, if it is one.
pub(crate) fn as_integer(s: &APComplex) -> Option<i64> {
    if s.im.is_zero() && s.re.is_integer() {
        let v = s.re.to_f64();
        if v.abs() < 1e15 {
            return Some(v as i64);
        }
    }
    None
}

fn excluded(s: &APComplex) -> Error {
    Error::ExcludedPoint(s.to_decimal(20))
}

/// True iff s is exactly a negative odd integer <= -3.
pub fn is_trivial_zero(s: &APComplex) -> bool {
    matches!(as_integer(s), Some(k) if k <= -3 && k % 2 != 0)
}

/// True iff s is a pole of X, a real even integer >= 2.
pub fn is_pole_of_x(s: &APComplex) -> bool {
    matches!(as_integer(s), Some(k) if k >= 2 && k % 2 == 0)
}

/// True iff X(s) = 0, i.e. s is a real negative odd integer.
pub fn is_zero_of_x(s: &APComplex) -> bool {
    matches!(as_integer(s), Some(k) if k <= -1 && k % 2 != 0)
}

/// f(-k) = -5^k/(k+1) [P + T Q] with P = B_{k+1}(1/5) - B_{k+1}(4/5) and
/// Q = B_{k+1}(2/5) - B_{k+1}(3/5), from zeta(-k, a) = -B_{k+1}(a)/(k+1).
fn f_at_nonpositive_integer(ws: &Workspace, k: u32) -> APComplex {
    let fifth = |j: i64| BigRational::new(BigInt::from(j), BigInt::from(5));
    let n = k as usize + 1;
    let p = bernoulli_polynomial(n, &fifth(1)) - bernoulli_polynomial(n, &fifth(4));
    let q = bernoulli_polynomial(n, &fifth(2)) - bernoulli_polynomial(n, &fifth(3));
    let scale = BigRational::new(-BigInt::from(5).pow(k), BigInt::from(n));
    let p = rational_to_apreal(&(&scale * p), ws.bits());
    let q = rational_to_apreal(&(&scale * q), ws.bits());
    let t = tan_theta_in(ws);
    ws.creal(&(p + q * t))
}

/// Dirichlet character of f: weight of m^-s, as (sign, uses tan theta).
fn residue_class(m: usize) -> Option<(bool, bool)> {
    match m % 5 {
        1 => Some((true, false)),
        2 => Some((true, true)),
        3 => Some((false, true)),
        4 => Some((false, false)),
        _ => None,
    }
}

/// Smallest prime factor of every n <= max.
fn smallest_prime_factors(max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; max + 1];
    for i in 2..=max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= max {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Series evaluation of f and optionally f', for any s != 1.
fn f_series(ws: &mut Workspace, s: &APComplex, want_deriv: bool) -> Result<SeriesValue> {
    let (sigma, t) = s.to_f64();
    let mut n = hurwitz::initial_cutoff(ws.ctx(), t);
    for _ in 0..4 {
        let m_max = 5 * n;
        let scale = hurwitz::scale_log10(sigma, m_max as f64, 1.0);
        let mut wx = ws.widened(hurwitz::extra_bits(scale));
        let s = wx.cround(s);
        let tt = tan_theta_in(&wx);

        // a = sum over m = 1 mod 5 minus m = 4 mod 5, b likewise for 2 and 3
        let spf = smallest_prime_factors(m_max);
        let mut pw: Vec<Option<APComplex>> = vec![None; m_max];
        let mut lg: Vec<Option<APReal>> = vec![None; m_max];
        let zero = APComplex::zero(wx.bits());
        let (mut a, mut b) = (zero.clone(), zero.clone());
        let (mut da, mut db) = (zero.clone(), zero);
        for m in 1..m_max {
            let Some((plus, uses_t)) = residue_class(m) else {
                continue;
            };
            let (term, ln_m) = if m == 1 {
                (wx.cint(1, 0), wx.int(0))
            } else {
                let p = spf[m] as usize;
                if p == m {
                    let l = wx.ln(&wx.int(m as i64));
                    (wx.pow_neg_s(&l, &s), l)
                } else {
                    let q = m / p;
                    let (tp, tq) = (pw[p].as_ref().unwrap(), pw[q].as_ref().unwrap());
                    let l = lg[p].as_ref().unwrap() + lg[q].as_ref().unwrap();
                    (tp * tq, l)
                }
            };
            let target = if uses_t { &mut b } else { &mut a };
            *target = if plus { &*target + &term } else { &*target - &term };
            if want_deriv {
                let d = term.scale(&ln_m);
                let target = if uses_t { &mut db } else { &mut da };
                *target = if plus { &*target - &d } else { &*target + &d };
            }
            pw[m] = Some(term);
            lg[m] = Some(ln_m);
        }

        let ln5 = wx.ln(&wx.int(5));
        let target = hurwitz::target_log10(wx.ctx()) + sigma * libm::log10(5.0);
        let big_n = wx.int(n as i64);
        let mut tails = zero_pair(&wx);
        let mut ok = true;
        for k in 1..=4i64 {
            let w = &big_n + &wx.ratio(k, 5);
            let lw = wx.ln(&wx.int(5 * n as i64 + k)) - &ln5;
            let w_neg_s = wx.pow_neg_s(&lw, &s);
            let Some(tail) = em_tail(&mut wx, &s, &w, &lw, &w_neg_s, want_deriv, target) else {
                ok = false;
                break;
            };
            let (plus, uses_t) = residue_class(k as usize).unwrap();
            let c = if uses_t { tt.clone() } else { wx.int(1) };
            let c = if plus { c } else { -c };
            tails.0 = &tails.0 + &tail.value.scale(&c);
            if let Some(d) = tail.deriv {
                tails.1 = &tails.1 + &d.scale(&c);
            }
        }
        if !ok {
            n *= 2;
            continue;
        }
        // 5^-s times the tails, differentiated with the product rule
        let five_neg_s = wx.pow_neg_s(&ln5, &s);
        let tail_value = &five_neg_s * &tails.0;
        let value = &(&a + &b.scale(&tt)) + &tail_value;
        let deriv = want_deriv.then(|| {
            let tail_d = &(&five_neg_s * &tails.1) - &tail_value.scale(&ln5);
            ws.cround(&(&(&da + &db.scale(&tt)) + &tail_d))
        });
        return Ok(SeriesValue {
            value: ws.cround(&value),
            deriv,
        });
    }
    Err(Error::PrecisionUnreachable(format!(
        "series for f at s = {}",
        s.to_decimal(20)
    )))
}

fn zero_pair(ws: &Workspace) -> (APComplex, APComplex) {
    (APComplex::zero(ws.bits()), APComplex::zero(ws.bits()))
}

pub(crate) fn f_in(ws: &mut Workspace, s: &APComplex, want_deriv: bool) -> Result<SeriesValue> {
    let s = ws.cround(s);
    match as_integer(&s) {
        Some(1) => Err(excluded(&s)),
        Some(k) if k <= 0 => {
            let value = f_at_nonpositive_integer(ws, (-k) as u32);
            let deriv = if want_deriv {
                f_series(ws, &s, true)?.deriv
            } else {
                None
            };
            Ok(SeriesValue { value, deriv })
        }
        _ => f_series(ws, &s, want_deriv),
    }
}

/// f(s) at context precision. Errors with ExcludedPoint at s = 1.
pub fn f_eval(s: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    Ok(f_in(&mut ws, s, false)?.value)
}

/// f'(s).
pub fn f_prime(s: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    Ok(f_in(&mut ws, s, true)?.deriv.expect("derivative requested"))
}

/// f(s) and f'(s) from one summation.
pub fn f_with_prime(s: &APComplex, ctx: &PrecisionContext) -> Result<(APComplex, APComplex)> {
    let mut ws = ctx.workspace();
    let v = f_in(&mut ws, s, true)?;
    Ok((v.value, v.deriv.expect("derivative requested")))
}

/// f(s) through four independent Hurwitz zeta evaluations; a slower second
/// route used to check [`f_eval`].
pub fn f_eval_hurwitz(s: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    if as_integer(s) == Some(1) {
        return Err(excluded(s));
    }
    let s = ws.cround(s);
    let params = DHParameters::new(ctx);
    let mut acc = APComplex::zero(ws.bits());
    for (i, k) in params.shifts.iter().enumerate() {
        let a = ws.ratio(*k, 5);
        let z = hurwitz_in(&mut ws, &s, &a, false)?.value;
        acc = &acc + &z.scale(&params.coefficient(i));
    }
    let ln5 = ws.ln(&ws.int(5));
    Ok(&ws.pow_neg_s(&ln5, &s) * &acc)
}

fn pole_of_x(s: &APComplex) -> Error {
    Error::PoleOfX(s.to_decimal(20))
}

/// The exponent g(s) of X(s) = exp g(s).
pub(crate) fn x_exponent_in(ws: &mut Workspace, s: &APComplex) -> Result<APComplex> {
    if is_pole_of_x(s) {
        return Err(pole_of_x(s));
    }
    let s = ws.cround(s);
    let half = ws.ratio(1, 2);
    let one = ws.int(1);
    let lead = (-&s).add_real(&half).scale(&ws.ln_5_over_pi());
    let a = (-s.mul_pow2(-1)).add_real(&one);
    let b = s.add_real(&one).mul_pow2(-1);
    let la = log_gamma_in(ws, &a)?;
    let lb = log_gamma_in(ws, &b)?;
    Ok(&(&lead + &la) - &lb)
}

pub(crate) fn x_in(ws: &mut Workspace, s: &APComplex) -> Result<APComplex> {
    if is_pole_of_x(s) {
        return Err(pole_of_x(s));
    }
    if is_zero_of_x(s) {
        return Ok(APComplex::zero(ws.bits()));
    }
    let g = x_exponent_in(ws, s)?;
    Ok(ws.cexp(&g))
}

/// X(s) from its gamma closed form. Exactly 0 at negative odd integers.
pub fn x_eval(s: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    x_in(&mut ws, s)
}

pub(crate) fn log_abs_x_in(ws: &mut Workspace, s: &APComplex) -> Result<APReal> {
    if is_pole_of_x(s) {
        return Err(pole_of_x(s));
    }
    if is_zero_of_x(s) {
        return Err(Error::Domain(format!(
            "log|X| is -infinity at the zero s = {} of X",
            s.to_decimal(20)
        )));
    }
    let s = ws.cround(s);
    let half = ws.ratio(1, 2);
    let one = ws.int(1);
    let lead = (&half - &s.re) * ws.ln_5_over_pi();
    let a = (-s.mul_pow2(-1)).add_real(&one);
    let b = s.add_real(&one).mul_pow2(-1);
    let la = ln_abs_gamma_in(ws, &a)?;
    let lb = ln_abs_gamma_in(ws, &b)?;
    Ok(lead + la - lb)
}

/// ln|X(s)| evaluated in a caller-held workspace, so that coefficient
/// tables are reused across many points.
pub fn log_abs_x_ws(ws: &mut Workspace, s: &APComplex) -> Result<APReal> {
    log_abs_x_in(ws, s)
}

/// ln|X(s)|.
pub fn log_abs_x(s: &APComplex, ctx: &PrecisionContext) -> Result<APReal> {
    let mut ws = ctx.workspace();
    log_abs_x_in(&mut ws, s)
}

/// Relative residual |f(s) - X(s) f(1-s)| / max(|f(s)|, |X(s) f(1-s)|, 10^-digits).
pub fn functional_equation_residual(s: &APComplex, ctx: &PrecisionContext) -> Result<APReal> {
    let mut ws = ctx.workspace();
    let s = ws.cround(s);
    let one_minus = (-&s).add_real(&ws.int(1));
    if matches!(as_integer(&s), Some(0) | Some(1)) {
        return Err(excluded(&s));
    }
    let x = x_in(&mut ws, &s)?;
    let fs = f_in(&mut ws, &s, false)?.value;
    let f1 = f_in(&mut ws, &one_minus, false)?.value;
    let rhs = &x * &f1;
    let num = (&fs - &rhs).abs();
    let floor = ws.pow10(-(ctx.decimal_digits() as i64));
    let a = fs.abs();
    let b = rhs.abs();
    let den = a.max_abs(&b).max_abs(&floor).clone();
    Ok(num / den)
}

/// Z(t) and its t-derivative, with the imaginary leak of the rotation.
#[derive(Debug, Clone)]
pub struct ZValue {
    pub value: APReal,
    pub im_leak: APReal,
    pub derivative: Option<APReal>,
}

pub(crate) fn z_in(ws: &mut Workspace, t: &APReal, want_deriv: bool) -> Result<ZValue> {
    let s = APComplex::new(ws.ratio(1, 2), ws.round(t));
    let g = x_exponent_in(ws, &s)?;
    let phi = g.im;
    let half_phi = phi.mul_pow2(-1);
    let rot = APComplex::new(ws.cos(&half_phi), -ws.sin(&half_phi));
    let fv = f_in(ws, &s, want_deriv)?;
    let z = &rot * &fv.value;
    let derivative = match fv.deriv {
        Some(fp) => {
            // phi'(t) = Re g'(s), g' = -ln(5/pi) - Psi(1 - s/2)/2 - Psi((1+s)/2)/2
            let one = ws.int(1);
            let a = (-s.mul_pow2(-1)).add_real(&one);
            let b = s.add_real(&one).mul_pow2(-1);
            let pa = digamma_in(ws, &a)?;
            let pb = digamma_in(ws, &b)?;
            let dphi = -ws.ln_5_over_pi() - (&pa.re + &pb.re).mul_pow2(-1);
            let inner = &fp.mul_i() - &fv.value.mul_i().scale(&dphi.mul_pow2(-1));
            Some((&rot * &inner).re)
        }
        None => None,
    };
    Ok(ZValue {
        value: z.re,
        im_leak: z.im.abs(),
        derivative,
    })
}

/// Z(t) = exp(-i phi(t)/2) f(1/2 + it), phi(t) = Im of the exponent of
/// X(1/2 + it). Returns (value, |imaginary part|).
pub fn z_function(t: &APReal, ctx: &PrecisionContext) -> Result<(APReal, APReal)> {
    let mut ws = ctx.workspace();
    let z = z_in(&mut ws, t, false)?;
    Ok((z.value, z.im_leak))
}

/// Z(t) together with Z'(t).
pub fn z_with_derivative(t: &APReal, ctx: &PrecisionContext) -> Result<ZValue> {
    let mut ws = ctx.workspace();
    z_in(&mut ws, t, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::make_context;

    fn ctx() -> PrecisionContext {
        make_context(40).unwrap()
    }

    #[test]
    fn tan_theta_value() {
        let ctx = make_context(30).unwrap();
        let t = tan_theta(&ctx);
        assert_eq!(t.to_decimal(30), "0.284079043840412296028291832393");
    }

    #[test]
    fn exact_values_at_nonpositive_integers() {
        let ctx = ctx();
        let ws = ctx.workspace();
        let f0 = f_eval(&ws.cint(0, 0), &ctx).unwrap();
        let want = ws.ratio(3, 5) + ws.ratio(1, 5) * tan_theta(&ctx);
        assert!((&f0.re - &want).log10_abs() < -45.0);
        assert!(f_eval(&ws.cint(-1, 0), &ctx).unwrap().is_zero());
        assert!(f_eval(&ws.cint(-3, 0), &ctx).unwrap().is_zero());
        assert!(!f_eval(&ws.cint(-2, 0), &ctx).unwrap().is_zero());
    }

    #[test]
    fn series_agrees_with_hurwitz_route() {
        let ctx = ctx();
        for text in ["0.3+2i", "-2.5+10i", "3.7-45i", "0.5+14.4i", "-2"] {
            let s = ctx.parse_complex(text).unwrap();
            let a = f_eval(&s, &ctx).unwrap();
            let b = f_eval_hurwitz(&s, &ctx).unwrap();
            let scale = a.log10_abs().max(0.0);
            assert!((&a - &b).log10_abs() - scale < -45.0, "f({text})");
        }
    }

    #[test]
    fn excluded_and_poles() {
        let ctx = ctx();
        let ws = ctx.workspace();
        assert!(matches!(f_eval(&ws.cint(1, 0), &ctx), Err(Error::ExcludedPoint(_))));
        assert!(matches!(x_eval(&ws.cint(2, 0), &ctx), Err(Error::PoleOfX(_))));
        assert!(matches!(x_eval(&ws.cint(6, 0), &ctx), Err(Error::PoleOfX(_))));
        assert!(x_eval(&ws.cint(3, 0), &ctx).is_ok());
        assert!(x_eval(&ws.cint(-1, 0), &ctx).unwrap().is_zero());
    }

    #[test]
    fn trivial_zero_list() {
        let ws = ctx().workspace();
        assert!(is_trivial_zero(&ws.cint(-3, 0)));
        assert!(is_trivial_zero(&ws.cint(-7, 0)));
        assert!(!is_trivial_zero(&ws.cint(-1, 0)));
        assert!(!is_trivial_zero(&ws.cint(-2, 0)));
        assert!(!is_trivial_zero(&ws.cint(-3, 1)));
    }

    #[test]
    fn x_is_one_at_half() {
        let ctx = ctx();
        let ws = ctx.workspace();
        let x = x_eval(&ws.creal(&ws.ratio(1, 2)), &ctx).unwrap();
        assert!((&x.re - &ws.int(1)).log10_abs() < -45.0);
    }

    #[test]
    fn residual_small() {
        let ctx = ctx();
        for text in ["0.3+2i", "-2.2+7i", "3.9-30i"] {
            let s = ctx.parse_complex(text).unwrap();
            let r = functional_equation_residual(&s, &ctx).unwrap();
            assert!(r.log10_abs() < -35.0, "residual at {text}: {r}");
        }
        let ws = ctx.workspace();
        let r = functional_equation_residual(&ws.cint(-3, 0), &ctx).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn z_is_real_and_changes_sign() {
        let ctx = ctx();
        let (v0, leak0) = z_function(&ctx.parse("14.0").unwrap(), &ctx).unwrap();
        let (v1, leak1) = z_function(&ctx.parse("14.8").unwrap(), &ctx).unwrap();
        assert!(leak0.log10_abs() < -25.0 && leak1.log10_abs() < -25.0);
        assert_ne!(v0.signum(), v1.signum());
    }
}
