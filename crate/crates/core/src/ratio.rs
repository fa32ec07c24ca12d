//! Modulus analytics of X(s): |X|, the inversion product X(s) X(1-s), the
//! zero and pole sets, and two forms of the t-derivative of |X|.

use alloc::format;
use alloc::vec::Vec;

use crate::dh::{f_in, is_pole_of_x, is_zero_of_x, log_abs_x_in, x_in};
use crate::error::{Error, Result};
use crate::precision::{APComplex, APReal, PrecisionContext, Workspace};
use crate::specfun::gamma::digamma_in;

/// Smallest tolerance accepted by [`d_abs_x_dt_series`].
pub const SERIES_MIN_TOL: f64 = 1e-12;

/// Bits used for the series form of the derivative; its tolerance never
/// asks for more than a dozen digits.
const SERIES_BITS: usize = 192;

pub(crate) fn abs_x_in(ws: &mut Workspace, s: &APComplex) -> Result<APReal> {
    if is_zero_of_x(s) {
        return Ok(APReal::zero(ws.bits()));
    }
    let l = log_abs_x_in(ws, s)?;
    Ok(ws.exp(&l))
}

/// |X(s)| = (5/pi)^(1/2 - sigma) exp Re[ln Gamma(1 - s/2) - ln Gamma((1+s)/2)].
pub fn abs_x(s: &APComplex, ctx: &PrecisionContext) -> Result<APReal> {
    let mut ws = ctx.workspace();
    abs_x_in(&mut ws, s)
}

/// X(s) X(1 - s), identically 1.
pub fn inversion_product(s: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    let s = ws.cround(s);
    let one_minus = (-&s).add_real(&ws.int(1));
    for p in [&s, &one_minus] {
        if is_pole_of_x(p) {
            return Err(Error::PoleOfX(p.to_decimal(20)));
        }
    }
    let a = x_in(&mut ws, &s)?;
    let b = x_in(&mut ws, &one_minus)?;
    Ok(&a * &b)
}

/// Real zeros and poles of X with their duality pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroPoleSet {
    /// -2n-1 for n = 0..=n_max.
    pub zeros: Vec<i64>,
    /// 2n+2 for n = 0..=n_max.
    pub poles: Vec<i64>,
    /// (zero, pole) with pole = 1 - zero.
    pub pairs: Vec<(i64, i64)>,
}

pub fn x_zeros_poles(n_max: u32) -> ZeroPoleSet {
    let n = n_max as i64;
    let zeros: Vec<i64> = (0..=n).map(|k| -2 * k - 1).collect();
    let poles: Vec<i64> = (0..=n).map(|k| 2 * k + 2).collect();
    let pairs = zeros.iter().copied().zip(poles.iter().copied()).collect();
    ZeroPoleSet {
        zeros,
        poles,
        pairs,
    }
}

/// d|X|/dt with the imaginary part of the evaluated bracket, which vanishes
/// analytically.
#[derive(Debug, Clone)]
pub struct DerivativeValue {
    pub value: APReal,
    pub im_leak: APReal,
}

pub(crate) fn d_abs_x_dt_in(ws: &mut Workspace, s: &APComplex) -> Result<DerivativeValue> {
    if is_pole_of_x(s) {
        return Err(Error::PoleOfX(s.to_decimal(20)));
    }
    let s = ws.cround(s);
    let sb = s.conj();
    let one = ws.int(1);
    let gamma_a = |z: &APComplex| (-z.mul_pow2(-1)).add_real(&one);
    let gamma_b = |z: &APComplex| z.add_real(&one).mul_pow2(-1);
    let p1 = digamma_in(ws, &gamma_a(&sb))?;
    let p2 = digamma_in(ws, &gamma_a(&s))?;
    let p3 = digamma_in(ws, &gamma_b(&s))?;
    let p4 = digamma_in(ws, &gamma_b(&sb))?;
    let bracket = &(&(&p1 - &p2) - &p3) + &p4;
    let modulus = abs_x_in(ws, &s)?.mul_pow2(-2);
    // (i |X| / 4) * bracket
    let full = bracket.mul_i().scale(&modulus);
    Ok(DerivativeValue {
        value: full.re,
        im_leak: full.im.abs(),
    })
}

/// d|X|/dt = (i|X|/4) [Psi(1 - conj(s)/2) - Psi(1 - s/2) - Psi((1+s)/2)
/// + Psi((1 + conj(s))/2)].
pub fn d_abs_x_dt_digamma(s: &APComplex, ctx: &PrecisionContext) -> Result<DerivativeValue> {
    let mut ws = ctx.workspace();
    d_abs_x_dt_in(&mut ws, s)
}

/// Result of the series form of d|X|/dt.
#[derive(Debug, Clone)]
pub struct SeriesDerivative {
    pub value: APReal,
    /// Number of summed terms.
    pub terms: u64,
    /// Bound on the omitted tail, already multiplied by the prefactor.
    pub tail_bound: f64,
}

/// Tail bound for n > N of sum 8(n - 1/4)/(|2n+s-1|^2 |2n-conj(s)|^2),
/// from comparison with an integral: with c = |sigma| + 1 and
/// y = 2N - c, the tail is at most 1/y^2 + 2c/(3 y^3).
fn series_tail_bound(sigma: f64, n: u64) -> f64 {
    let c = sigma.abs() + 1.0;
    let y = 2.0 * n as f64 - c;
    if y <= 0.0 {
        return f64::INFINITY;
    }
    1.0 / (y * y) + 2.0 * c / (3.0 * y * y * y)
}

/// d|X|/dt = (1/2 - sigma) t |X(s)| sum_{n>=1} 8(n - 1/4)/(|2n+s-1|^2 |2n-conj(s)|^2),
/// truncated once the tail bound drops below `tol`.
pub fn d_abs_x_dt_series(
    s: &APComplex,
    tol: &APReal,
    ctx: &PrecisionContext,
) -> Result<SeriesDerivative> {
    let tol_f = tol.to_f64();
    if tol_f < SERIES_MIN_TOL {
        return Err(Error::TolTooTight(tol.to_decimal(6)));
    }
    let mut ws = ctx.workspace();
    let half = ws.ratio(1, 2);
    let pre = (&half - &s.re) * &s.im;
    if pre.is_zero() {
        return Ok(SeriesDerivative {
            value: APReal::zero(ws.bits()),
            terms: 0,
            tail_bound: 0.0,
        });
    }
    let modulus = abs_x_in(&mut ws, s)?;
    let pre = (pre * modulus).with_precision(SERIES_BITS);
    let pre_f = pre.to_f64().abs();
    let (sigma, t) = s.to_f64();

    let mut n_terms = (libm::ceil(libm::sqrt(sigma * sigma + t * t)) as u64 + 10)
        .max(libm::ceil(libm::sqrt(1.0 / tol_f)) as u64);
    let enough = |n: u64| pre_f * series_tail_bound(sigma, n) <= tol_f / 2.0;
    if !enough(n_terms) {
        let mut lo = n_terms;
        let mut hi = n_terms * 2;
        while !enough(hi) {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if enough(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        n_terms = hi;
    }

    let sig = s.re.with_precision(SERIES_BITS);
    let t2 = s.im.with_precision(SERIES_BITS).sqr();
    let one = APReal::from_i64(1, SERIES_BITS);
    let quarter = APReal::from_ratio(1, 4, SERIES_BITS);
    let mut acc = APReal::zero(SERIES_BITS);
    for n in 1..=n_terms {
        let nr = APReal::from_i64(n as i64, SERIES_BITS);
        let two_n = nr.mul_pow2(1);
        let u = &(&two_n + &sig) - &one;
        let v = &two_n - &sig;
        let den = (u.sqr() + &t2) * (v.sqr() + &t2);
        let term = (&nr - &quarter).mul_pow2(3) / den;
        if !term.is_positive() {
            return Err(Error::Domain(format!(
                "series term {n} is not positive at s = {}",
                s.to_decimal(20)
            )));
        }
        acc = acc + term;
    }
    Ok(SeriesDerivative {
        value: (pre * acc).with_precision(ws.bits()),
        terms: n_terms,
        tail_bound: pre_f * series_tail_bound(sigma, n_terms),
    })
}

/// Direction of |X| along a vertical line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
}

#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub sigma: APReal,
    pub samples: Vec<(APReal, APReal)>,
    pub direction: Direction,
    pub violations: usize,
}

/// Samples |X(sigma + it)| at `n` equispaced t in [t0, t1] and counts
/// adjacent pairs that break the direction expected from sign(1/2 - sigma).
pub fn monotonicity_scan(
    sigma: &APReal,
    t0: &APReal,
    t1: &APReal,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<MonotonicityReport> {
    if n < 2 || t0.is_negative() || t0 >= t1 {
        return Err(Error::Domain(format!(
            "monotonicity_scan needs 0 <= t0 < t1 and n >= 2, got t0 = {}, t1 = {}, n = {n}",
            t0.to_decimal(20),
            t1.to_decimal(20)
        )));
    }
    let mut ws = ctx.workspace();
    let sigma = ws.round(sigma);
    let step = (ws.round(t1) - ws.round(t0)) / ws.int(n as i64 - 1);
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let t = ws.round(t0) + &step * ws.int(k as i64);
        let m = abs_x_in(&mut ws, &APComplex::new(sigma.clone(), t.clone()))?;
        samples.push((t, m));
    }
    let half = ws.ratio(1, 2);
    let direction = match sigma.partial_cmp(&half) {
        Some(core::cmp::Ordering::Less) => Direction::Increasing,
        Some(core::cmp::Ordering::Greater) => Direction::Decreasing,
        _ => Direction::Constant,
    };
    let tol = ws.pow10(-(ctx.decimal_digits() as i64 - 10));
    let violations = samples
        .windows(2)
        .filter(|w| {
            let (a, b) = (&w[0].1, &w[1].1);
            match direction {
                Direction::Increasing => b <= a,
                Direction::Decreasing => b >= a,
                Direction::Constant => (b - a).abs() > tol,
            }
        })
        .count();
    Ok(MonotonicityReport {
        sigma,
        samples,
        direction,
        violations,
    })
}

/// |central difference in t of |f(s)|/|f(1-s)| minus the digamma form of
/// d|X|/dt|. The functional equation makes the two derivatives equal.
pub fn ratio_derivative_check(s: &APComplex, h: &APReal, ctx: &PrecisionContext) -> Result<APReal> {
    let mut ws = ctx.workspace();
    let s = ws.cround(s);
    let h = ws.round(h);
    let floor = ws.pow10(-(ctx.decimal_digits() as i64 / 2));
    let ratio_at = |ws: &mut Workspace, p: &APComplex| -> Result<APReal> {
        let one_minus = (-p).add_real(&ws.int(1));
        let den = f_in(ws, &one_minus, false)?.value.abs();
        if den < floor {
            return Err(Error::DivideByZero(format!(
                "|f(1-s)| = {} at s = {}",
                den.to_decimal(10),
                p.to_decimal(20)
            )));
        }
        Ok(f_in(ws, p, false)?.value.abs() / den)
    };
    let up = APComplex::new(s.re.clone(), &s.im + &h);
    let down = APComplex::new(s.re.clone(), &s.im - &h);
    let r_up = ratio_at(&mut ws, &up)?;
    let r_down = ratio_at(&mut ws, &down)?;
    let fd = (r_up - r_down) / h.mul_pow2(1);
    let exact = d_abs_x_dt_in(&mut ws, &s)?.value;
    Ok((fd - exact).abs())
}

/// exp(-|sigma - 1/2| |t| / kappa), equal to 1 on the critical line.
pub fn pseudo_zero_score(sigma: &APReal, t: &APReal, kappa: &APReal) -> Result<APReal> {
    if !kappa.is_positive() {
        return Err(Error::Domain(format!(
            "kappa must be positive, got {}",
            kappa.to_decimal(20)
        )));
    }
    let bits = sigma.precision().max(t.precision()).max(kappa.precision());
    let digits = ((bits as f64 * 0.301) as u32).max(crate::precision::MIN_DECIMAL_DIGITS + 10) - 10;
    let ctx = PrecisionContext::new(digits)?;
    let mut ws = Workspace::new(ctx, 0);
    let half = ws.ratio(1, 2);
    let x = (ws.round(sigma) - half).abs() * ws.round(t).abs() / ws.round(kappa);
    Ok(ws.exp(&-x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::make_context;

    #[test]
    fn zero_pole_enumeration() {
        let z = x_zeros_poles(2);
        assert_eq!(z.zeros, [-1, -3, -5]);
        assert_eq!(z.poles, [2, 4, 6]);
        assert_eq!(z.pairs[1], (-3, 4));
        let z = x_zeros_poles(0);
        assert_eq!((z.zeros, z.poles), (alloc::vec![-1], alloc::vec![2]));
    }

    #[test]
    fn modulus_on_critical_line() {
        let ctx = make_context(40).unwrap();
        let s = ctx.parse_complex("0.5+7i").unwrap();
        let m = abs_x(&s, &ctx).unwrap();
        assert!((m - ctx.parse("1").unwrap()).log10_abs() < -30.0);
    }

    #[test]
    fn inversion_is_one() {
        let ctx = make_context(40).unwrap();
        for text in ["0.7+3i", "0.5", "-1+0.3i"] {
            let s = ctx.parse_complex(text).unwrap();
            let p = inversion_product(&s, &ctx).unwrap();
            let one = APComplex::one(p.precision());
            assert!((&p - &one).log10_abs() < -30.0, "{text}");
        }
        let s = ctx.parse_complex("-1").unwrap();
        assert!(matches!(inversion_product(&s, &ctx), Err(Error::PoleOfX(_))));
    }

    #[test]
    fn derivative_forms_agree() {
        let ctx = make_context(40).unwrap();
        let s = ctx.parse_complex("0.3+5i").unwrap();
        let d = d_abs_x_dt_digamma(&s, &ctx).unwrap();
        assert!(d.value.is_positive());
        let tol = ctx.parse("1e-10").unwrap();
        let series = d_abs_x_dt_series(&s, &tol, &ctx).unwrap();
        assert!((&series.value - &d.value).abs().to_f64() < 1e-10);
        let on_line = ctx.parse_complex("0.5+3i").unwrap();
        assert!(d_abs_x_dt_series(&on_line, &tol, &ctx).unwrap().value.is_zero());
        let tight = ctx.parse("1e-13").unwrap();
        assert!(matches!(
            d_abs_x_dt_series(&s, &tight, &ctx),
            Err(Error::TolTooTight(_))
        ));
    }

    #[test]
    fn score_values() {
        let ctx = make_context(30).unwrap();
        let k = ctx.parse("1.21164").unwrap();
        let on = pseudo_zero_score(&ctx.parse("0.5").unwrap(), &ctx.parse("100").unwrap(), &k).unwrap();
        assert_eq!(on.to_decimal(20), "1");
        let s1 = pseudo_zero_score(
            &ctx.parse("0.808517").unwrap(),
            &ctx.parse("85.699348").unwrap(),
            &k,
        )
        .unwrap();
        assert!((s1.to_f64() - 3.3e-10).abs() < 0.1e-10);
        assert!(pseudo_zero_score(&ctx.parse("0.5").unwrap(), &ctx.parse("1").unwrap(), &ctx.parse("0").unwrap()).is_err());
    }
}
