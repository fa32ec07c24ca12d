//! Log-gamma and digamma for complex arguments.
//!
//! Both push the argument to the right with the recurrence until the
//! asymptotic (Stirling) series converges to the working precision, then undo
//! the shift. The log-gamma shift is summed as one product whose logarithm is
//! corrected by the exact argument count, which yields the standard continuous
//! branch (cut along the negative real axis, approached from above).

use alloc::format;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::precision::{APComplex, APReal, PrecisionContext, Workspace};

/// Cap on asymptotic-series terms before the shift radius is enlarged.
const MAX_SERIES_TERMS: usize = 1500;

pub(crate) fn is_nonpositive_integer(z: &APComplex) -> bool {
    z.im.is_zero() && !z.re.is_positive() && z.re.is_integer()
}

fn pole(function: &'static str, z: &APComplex) -> Error {
    Error::Pole {
        function,
        at: z.to_decimal(20),
    }
}

/// Shift count m >= 0 with Re(z + m) >= 0 and |z + m| >= radius.
fn shift_count(z: &APComplex, radius: f64) -> usize {
    let (x, y) = z.to_f64();
    let mut m = if x < 0.0 { libm::ceil(-x) } else { 0.0 };
    if y * y < radius * radius {
        let need = libm::sqrt(radius * radius - y * y) - x;
        if need > m {
            m = libm::ceil(need);
        }
    }
    m as usize
}

fn initial_radius(ws: &Workspace) -> f64 {
    0.6 * ws.ctx().total_digits() as f64 + 10.0
}

/// Number of asymptotic terms needed at w, or None if the series cannot
/// reach the target there. `coeff_log10(k)` is log10 of the k-th
/// coefficient, `power(k)` the power of 1/w multiplying it.
fn series_terms(
    ws: &mut Workspace,
    w: &APComplex,
    target_log10: f64,
    coeff_log10: impl Fn(&mut Workspace, usize) -> f64,
    power: impl Fn(usize) -> f64,
) -> Option<usize> {
    let (x, y) = w.to_f64();
    let lw = 0.5 * libm::log10(x * x + y * y);
    // remainder bound: next term times sec^(2k+2)(arg w / 2)
    let half_arg = 0.5 * libm::atan2(y, x);
    let log_sec = -libm::log10(libm::cos(half_arg));
    let mut prev = f64::INFINITY;
    for k in 1..=MAX_SERIES_TERMS {
        let t = coeff_log10(ws, k) - power(k) * lw + (2 * k + 2) as f64 * log_sec;
        if t < target_log10 {
            return Some(k);
        }
        if t > prev && k > 4 {
            return None;
        }
        prev = t;
    }
    None
}

/// Shifted argument w = z + m and the number of asymptotic terms to use.
fn plan(
    ws: &mut Workspace,
    z: &APComplex,
    coeff_log10: impl Fn(&mut Workspace, usize) -> f64 + Copy,
    power: impl Fn(usize) -> f64 + Copy,
) -> Result<(usize, APComplex, usize)> {
    let target = -(ws.ctx().total_digits() as f64) - 3.0;
    let mut radius = initial_radius(ws);
    for _ in 0..8 {
        let m = shift_count(z, radius);
        let w = z.add_real(&ws.int(m as i64));
        if let Some(k) = series_terms(ws, &w, target, coeff_log10, power) {
            return Ok((m, w, k));
        }
        radius *= 1.5;
    }
    Err(Error::PrecisionUnreachable(format!(
        "asymptotic series at z = {}",
        z.to_decimal(20)
    )))
}

fn stirling_log10(ws: &mut Workspace, k: usize) -> f64 {
    ws.stirling_coeff(k).log10_abs()
}

fn psi_log10(ws: &mut Workspace, k: usize) -> f64 {
    ws.psi_coeff(k).log10_abs()
}

/// Stirling series for ln Gamma(w), Re w >= 0 and |w| large.
fn stirling(ws: &mut Workspace, w: &APComplex, terms: usize) -> APComplex {
    let ln_w = ws.cln(w);
    let half = ws.ratio(1, 2);
    let mut acc = &(&w.add_real(&-&half) * &ln_w) - w;
    acc = acc.add_real(&ws.half_ln_2pi());
    let inv = w.recip();
    let inv2 = inv.sqr();
    let mut p = inv;
    for k in 1..=terms {
        acc = &acc + &p.scale(&ws.stirling_coeff(k));
        p = &p * &inv2;
    }
    acc
}

/// Continuous log-gamma. Errors at nonpositive integers.
pub fn log_gamma(z: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    log_gamma_in(&mut ws, z)
}

pub(crate) fn log_gamma_in(ws: &mut Workspace, z: &APComplex) -> Result<APComplex> {
    if is_nonpositive_integer(z) {
        return Err(pole("log_gamma", z));
    }
    let z = ws.cround(z);
    let (m, w, terms) = plan(ws, &z, stirling_log10, |k| (2 * k - 1) as f64)?;
    let mut result = stirling(ws, &w, terms);
    if m > 0 {
        let mut prod = z.clone();
        let (x, y) = z.to_f64();
        let mut arg_sum = libm::atan2(y, x);
        for k in 1..m {
            let zk = z.add_real(&ws.int(k as i64));
            prod = &prod * &zk;
            arg_sum += libm::atan2(y, x + k as f64);
        }
        let mut log_prod = ws.cln(&prod);
        let winding = libm::round((arg_sum - log_prod.im.to_f64()) / (2.0 * PI));
        if winding != 0.0 {
            let two_pi = ws.pi().mul_pow2(1);
            log_prod.im = &log_prod.im + &(&two_pi * &ws.int(winding as i64));
        }
        result = &result - &log_prod;
    }
    Ok(result)
}

/// Re ln Gamma(z) = ln|Gamma(z)|.
pub(crate) fn ln_abs_gamma_in(ws: &mut Workspace, z: &APComplex) -> Result<APReal> {
    if is_nonpositive_integer(z) {
        return Err(pole("log_gamma", z));
    }
    let z = ws.cround(z);
    let (m, w, terms) = plan(ws, &z, stirling_log10, |k| (2 * k - 1) as f64)?;
    let mut result = stirling(ws, &w, terms).re;
    if m > 0 {
        let mut prod = z.clone();
        for k in 1..m {
            prod = &prod * &z.add_real(&ws.int(k as i64));
        }
        result = &result - &ws.ln_abs(&prod);
    }
    Ok(result)
}

/// Psi(z) = Gamma'(z)/Gamma(z). Errors at nonpositive integers.
pub fn digamma(z: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    digamma_in(&mut ws, z)
}

pub(crate) fn digamma_in(ws: &mut Workspace, z: &APComplex) -> Result<APComplex> {
    if is_nonpositive_integer(z) {
        return Err(pole("digamma", z));
    }
    let z = ws.cround(z);
    let (m, w, terms) = plan(ws, &z, psi_log10, |k| (2 * k) as f64)?;
    let inv = w.recip();
    let inv2 = inv.sqr();
    let mut acc = &ws.cln(&w) - &inv.mul_pow2(-1);
    let mut p = inv2.clone();
    for k in 1..=terms {
        acc = &acc - &p.scale(&ws.psi_coeff(k));
        p = &p * &inv2;
    }
    for k in 0..m {
        acc = &acc - &z.add_real(&ws.int(k as i64)).recip();
    }
    Ok(acc)
}

/// Euler's constant from the harmonic sum with its asymptotic correction:
/// gamma = H_N - ln N - 1/(2N) + sum_k B_2k / (2k N^2k).
pub fn euler_gamma(ctx: &PrecisionContext) -> APReal {
    let mut ws = ctx.workspace();
    euler_gamma_in(&mut ws)
}

pub(crate) fn euler_gamma_in(ws: &mut Workspace) -> APReal {
    let n = ws.ctx().total_digits() as i64;
    let big_n = ws.int(n);
    let mut h = ws.int(0);
    for j in 1..=n {
        h = &h + &ws.int(j).recip();
    }
    let mut acc = &(&h - &ws.ln(&big_n)) - &big_n.mul_pow2(1).recip();
    let inv2 = big_n.sqr().recip();
    let mut p = inv2.clone();
    let target = -(ws.ctx().total_digits() as f64) - 3.0;
    for k in 1..=MAX_SERIES_TERMS {
        let term = &ws.psi_coeff(k) * &p;
        let small = term.log10_abs() < target;
        acc = &acc + &term;
        if small {
            break;
        }
        p = &p * &inv2;
    }
    acc
}

/// Smallest tolerance accepted by [`digamma_series`].
pub const DIGAMMA_SERIES_MIN_TOL: f64 = 1e-15;

/// Psi(z) from the series -gamma + sum_{n>=1} (z-1)/(n(n+z-1)).
///
/// The first N terms are summed directly. The remainder is rewritten as
/// sum_j (-1)^(j+1) (z-1)^j zeta(j+1, N+1), which converges geometrically
/// once N+1 > |z-1|, and is truncated when its bound
/// 2 q^(J+1) / (1-q), q = |z-1|/(N+1), drops below `tol`.
pub fn digamma_series(z: &APComplex, tol: &APReal, ctx: &PrecisionContext) -> Result<APComplex> {
    if tol.to_f64() < DIGAMMA_SERIES_MIN_TOL {
        return Err(Error::TolTooTight(tol.to_decimal(6)));
    }
    if is_nonpositive_integer(z) {
        return Err(pole("digamma_series", z));
    }
    let mut ws = ctx.workspace();
    let z = ws.cround(z);
    let c = z.add_real(&ws.int(-1));
    let c_abs = c.abs().to_f64();
    let n_head = (libm::ceil(8.0 * c_abs) as i64).max(64);
    let q = c_abs / (n_head + 1) as f64;
    let tol_log10 = libm::log10(tol.to_f64());
    let mut j_max = 1usize;
    while libm::log10(2.0 / (1.0 - q)) + (j_max + 1) as f64 * libm::log10(q.max(1e-300)) > tol_log10 - 0.5 {
        j_max += 1;
    }

    // head terms, plus the partial power sums H_N^(j+1) needed by the tail
    let mut head = APComplex::zero(ws.bits());
    let mut power_sums = alloc::vec![ws.int(0); j_max + 1];
    for n in 1..=n_head {
        let nr = ws.int(n);
        let denom = c.add_real(&nr).scale(&nr);
        head = &head + &(&c / &denom);
        let inv = nr.recip();
        let mut p = inv.sqr();
        for ps in power_sums.iter_mut().skip(1) {
            *ps = &*ps + &p;
            p = &p * &inv;
        }
    }

    let mut tail = APComplex::zero(ws.bits());
    let mut c_pow = c.clone();
    for (j, h) in power_sums.iter().enumerate().skip(1) {
        let s = ws.cint(j as i64 + 1, 0);
        let one = ws.int(1);
        let zeta = super::hurwitz::hurwitz_in(&mut ws, &s, &one, false)?.value;
        let rest = &zeta.re - h;
        let term = c_pow.scale(&rest);
        tail = if j % 2 == 1 { &tail + &term } else { &tail - &term };
        c_pow = &c_pow * &c;
    }
    let gamma = euler_gamma_in(&mut ws);
    Ok((&head + &tail).add_real(&-gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::make_context;

    const EULER_GAMMA_70: &str =
        "0.5772156649015328606065120900824024310421593359399235988057672348848677";

    fn ctx() -> PrecisionContext {
        make_context(50).unwrap()
    }

    fn c(text: &str, ctx: &PrecisionContext) -> APComplex {
        ctx.parse_complex(text).unwrap()
    }

    fn close(a: &APComplex, b: &APComplex, log10_tol: f64) -> bool {
        (a - b).log10_abs() < log10_tol
    }

    #[test]
    fn euler_constant() {
        let ctx = ctx();
        let g = euler_gamma(&ctx);
        let want = ctx.parse(EULER_GAMMA_70).unwrap();
        assert!((&g - &want).log10_abs() < -55.0);
    }

    #[test]
    fn log_gamma_special_values() {
        let ctx = ctx();
        let one = log_gamma(&c("1", &ctx), &ctx).unwrap();
        assert!(one.log10_abs() < -55.0);
        let half = log_gamma(&c("0.5", &ctx), &ctx).unwrap();
        let mut ws = ctx.workspace();
        let pi = ws.pi();
        let want = ws.ln(&pi).mul_pow2(-1);
        assert!((&half.re - &want).log10_abs() < -55.0);
        assert!(half.im.is_zero());
    }

    #[test]
    fn log_gamma_recurrence() {
        let ctx = ctx();
        let mut ws = ctx.workspace();
        for text in ["0.3+2i", "-4.7+0.01i", "12.5-30i", "0.25+150i"] {
            let z = c(text, &ctx);
            let a = log_gamma(&z.add_real(&ws.int(1)), &ctx).unwrap();
            let b = log_gamma(&z, &ctx).unwrap();
            let ln_z = ws.cln(&z);
            assert!(close(&(&a - &b), &ln_z, -52.0), "recurrence at {text}");
        }
    }

    #[test]
    fn log_gamma_branch_matches_reference() {
        let ctx = ctx();
        // reference values of the continuous log-gamma
        let cases = [
            (
                "0.3+2i",
                "-2.359449355937571013594495376343548348709191110171285854585863254935692",
                "-0.9169076135186697369752784709574898510640577015268694070831180409950109",
            ),
            (
                "-2.5",
                "-0.05624371649767405067259453009765428412294410255284562552849066089542353",
                "-9.424777960769379715387930149838508652591508198125317462924833776923449",
            ),
        ];
        for (z, re, im) in cases {
            let got = log_gamma(&c(z, &ctx), &ctx).unwrap();
            let want = APComplex::new(ctx.parse(re).unwrap(), ctx.parse(im).unwrap());
            assert!(close(&got, &want, -55.0), "log_gamma({z}) = {got}");
        }
    }

    #[test]
    fn poles_rejected() {
        let ctx = ctx();
        for z in ["0", "-2", "-17"] {
            assert!(matches!(log_gamma(&c(z, &ctx), &ctx), Err(Error::Pole { .. })));
            assert!(matches!(digamma(&c(z, &ctx), &ctx), Err(Error::Pole { .. })));
        }
        assert!(log_gamma(&c("-2+1e-40i", &ctx), &ctx).is_ok());
    }

    #[test]
    fn digamma_special_values() {
        let ctx = ctx();
        let g = ctx.parse(EULER_GAMMA_70).unwrap();
        let one = digamma(&c("1", &ctx), &ctx).unwrap();
        assert!((&one.re + &g).log10_abs() < -55.0);
        let half = digamma(&c("0.5", &ctx), &ctx).unwrap();
        let mut ws = ctx.workspace();
        let want = -(&g + &ws.ln(&ws.int(2)).mul_pow2(1));
        assert!((&half.re - &want).log10_abs() < -55.0);
    }

    #[test]
    fn digamma_reference_value() {
        let ctx = ctx();
        let got = digamma(&c("0.75+5i", &ctx), &ctx).unwrap();
        let want = c(
            "1.609020512714473152910924483177720300629073106878160728571978057776479+1.520669713645493405283364912564523607558160426584021534691081949965446i",
            &ctx,
        );
        assert!(close(&got, &want, -55.0));
    }

    #[test]
    fn series_oracle_agrees() {
        let ctx = ctx();
        let tol = ctx.parse("1e-12").unwrap();
        for text in ["1", "2", "0.75+5i", "-3.5+0.5i"] {
            let z = c(text, &ctx);
            let a = digamma(&z, &ctx).unwrap();
            let b = digamma_series(&z, &tol, &ctx).unwrap();
            assert!(close(&a, &b, -12.0), "digamma vs series at {text}");
        }
    }

    #[test]
    fn series_rejects_tight_tolerance() {
        let ctx = ctx();
        let tol = ctx.parse("1e-16").unwrap();
        assert!(matches!(
            digamma_series(&c("1", &ctx), &tol, &ctx),
            Err(Error::TolTooTight(_))
        ));
    }
}
