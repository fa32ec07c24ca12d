//! Hurwitz zeta function and its s-derivative by Euler-Maclaurin summation.
//!
//! zeta(s, a) = sum_{k<N} (k+a)^-s + w^(1-s)/(s-1) + w^-s/2
//!            + sum_j B_2j/(2j)! (s)_(2j-1) w^(1-s-2j),   w = N + a,
//!
//! where (s)_m is the rising factorial. The derivative differentiates every
//! term, tracking d/ds of the rising factorial by the product rule.

use alloc::format;

use crate::error::{Error, Result};
use crate::precision::{APComplex, APReal, PrecisionContext, Workspace};

/// Cap on Euler-Maclaurin correction terms.
const MAX_CORRECTION_TERMS: usize = 4000;
/// How many times N may be doubled before giving up.
const MAX_DOUBLINGS: usize = 3;

/// A value and, when requested, its s-derivative.
#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub value: APComplex,
    pub deriv: Option<APComplex>,
}

/// Tail sum_{n>=0} (w+n)^-s of an Euler-Maclaurin split at real w > 0.
///
/// `w_neg_s` is w^-s and `ln_w` is ln w. Returns None when the correction
/// series starts growing before reaching `target_log10`, in which case the
/// caller must move w further out.
pub(crate) fn em_tail(
    ws: &mut Workspace,
    s: &APComplex,
    w: &APReal,
    ln_w: &APReal,
    w_neg_s: &APComplex,
    want_deriv: bool,
    target_log10: f64,
) -> Option<SeriesValue> {
    let one = ws.int(1);
    let s1 = s.add_real(&-&one);
    let main = &w_neg_s.scale(w) / &s1;
    let half = w_neg_s.mul_pow2(-1);
    let mut value = &main + &half;
    let mut deriv = if want_deriv {
        let d_main = &(-main.scale(ln_w)) - &(&main / &s1);
        Some(&d_main - &half.scale(ln_w))
    } else {
        None
    };

    let (sigma, _) = s.to_f64();
    let s_abs = s.abs().to_f64();
    let deriv_slack = libm::log10(1.0 + ln_w.to_f64().abs());
    let inv_w = w.recip();
    let inv_w2 = inv_w.sqr();
    let mut p = w_neg_s.scale(&inv_w);
    let mut r = s.clone();
    let mut dr = ws.cint(1, 0);
    let mut prev = f64::INFINITY;
    for j in 1..=MAX_CORRECTION_TERMS {
        let c = ws.em_coeff(j);
        let term = (&r * &p).scale(&c);
        let dterm = if want_deriv {
            Some((&(&dr - &r.scale(ln_w)) * &p).scale(&c))
        } else {
            None
        };
        let mag = term.log10_abs();
        // remainder after this term is bounded by the next term times
        // |s + 2j + 1| / (sigma + 2j + 1)
        let denom = sigma + (2 * j + 1) as f64;
        let factor = if denom > 0.0 {
            libm::log10((s_abs + (2 * j + 1) as f64) / denom)
        } else {
            f64::INFINITY
        };
        let done = mag + factor < target_log10
            && dterm
                .as_ref()
                .map_or(true, |d| d.log10_abs() + factor < target_log10 + deriv_slack);
        value = &value + &term;
        if let (Some(acc), Some(d)) = (deriv.as_mut(), dterm) {
            *acc = &*acc + &d;
        }
        if done {
            return Some(SeriesValue { value, deriv });
        }
        if mag > prev && (2 * j) as f64 > s_abs + 2.0 {
            return None;
        }
        prev = mag;
        // advance: R_{j+1} = R_j (s + 2j - 1)(s + 2j)
        let a = s.add_real(&ws.int(2 * j as i64 - 1));
        let b = s.add_real(&ws.int(2 * j as i64));
        let q = &a * &b;
        if want_deriv {
            let dq = (&a + &b).clone();
            dr = &(&dr * &q) + &(&r * &dq);
        }
        r = &r * &q;
        p = p.scale(&inv_w2);
    }
    None
}

/// Initial truncation index for the direct sum.
pub(crate) fn initial_cutoff(ctx: &PrecisionContext, t: f64) -> usize {
    let d = ctx.total_digits() as f64;
    let by_digits = libm::ceil(1.3 * d) as usize;
    let by_height = libm::ceil(t.abs() / 2.0) as usize + 10;
    by_digits.max(by_height)
}

/// log10 of the largest partial-sum magnitude, max(1, w^(1-sigma), a^-sigma).
pub(crate) fn scale_log10(sigma: f64, w: f64, a: f64) -> f64 {
    let big_tail = (1.0 - sigma) * libm::log10(w);
    let first = -sigma * libm::log10(a);
    big_tail.max(first).max(0.0)
}

/// Absolute tail target, 10^-(digits + guard/2).
pub(crate) fn target_log10(ctx: &PrecisionContext) -> f64 {
    -(ctx.decimal_digits() as f64 + ctx.guard_digits() as f64 / 2.0)
}

/// Extra working bits so that cancellation down from `scale` keeps the
/// context precision.
pub(crate) fn extra_bits(scale: f64) -> usize {
    libm::ceil(scale * 3.33) as usize + 32
}

fn check_args(s: &APComplex, a: &APReal) -> Result<()> {
    if !a.is_positive() || a.to_f64() > 1.0 {
        return Err(Error::Domain(format!(
            "hurwitz_zeta needs 0 < a <= 1, got a = {}",
            a.to_decimal(20)
        )));
    }
    if s.im.is_zero() && s.re.to_f64() == 1.0 && s.re.is_integer() {
        return Err(Error::Pole {
            function: "hurwitz_zeta",
            at: "1".into(),
        });
    }
    Ok(())
}

pub(crate) fn hurwitz_in(
    ws: &mut Workspace,
    s: &APComplex,
    a: &APReal,
    want_deriv: bool,
) -> Result<SeriesValue> {
    hurwitz_from_in(ws, s, a, 0, want_deriv)
}

/// zeta(s, a + skip): the Euler-Maclaurin head starts at n = skip.
pub(crate) fn hurwitz_from_in(
    ws: &mut Workspace,
    s: &APComplex,
    a: &APReal,
    skip: usize,
    want_deriv: bool,
) -> Result<SeriesValue> {
    check_args(s, a)?;
    let (sigma, t) = s.to_f64();
    let a_f = a.to_f64() + skip as f64;
    let mut n = initial_cutoff(ws.ctx(), t);
    for _ in 0..=MAX_DOUBLINGS {
        let w_f = n as f64 + a_f;
        let scale = scale_log10(sigma, w_f, a_f);
        let mut wx = ws.widened(extra_bits(scale));
        let s = wx.cround(s);
        let a = wx.round(a);

        let mut value = APComplex::zero(wx.bits());
        let mut deriv = APComplex::zero(wx.bits());
        for k in skip..skip + n {
            let x = a.clone() + wx.int(k as i64);
            let lx = wx.ln(&x);
            let term = wx.pow_neg_s(&lx, &s);
            if want_deriv {
                deriv = &deriv - &term.scale(&lx);
            }
            value = &value + &term;
        }
        let w = a.clone() + wx.int((skip + n) as i64);
        let lw = wx.ln(&w);
        let w_neg_s = wx.pow_neg_s(&lw, &s);
        let target = target_log10(wx.ctx());
        if let Some(tail) = em_tail(&mut wx, &s, &w, &lw, &w_neg_s, want_deriv, target) {
            value = &value + &tail.value;
            let deriv = tail.deriv.map(|d| ws.cround(&(&deriv + &d)));
            return Ok(SeriesValue {
                value: ws.cround(&value),
                deriv,
            });
        }
        n *= 2;
    }
    Err(Error::PrecisionUnreachable(format!(
        "Euler-Maclaurin for zeta({}, {})",
        s.to_decimal(20),
        a.to_decimal(20)
    )))
}

/// zeta(s, a) for 0 < a <= 1, s != 1.
pub fn hurwitz_zeta(s: &APComplex, a: &APReal, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    Ok(hurwitz_in(&mut ws, s, a, false)?.value)
}

/// zeta(s, a + k) for 0 < a <= 1 and integer k >= 0, summed directly from
/// n = k rather than through the recurrence.
pub fn hurwitz_zeta_from(s: &APComplex, a: &APReal, k: usize, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    Ok(hurwitz_from_in(&mut ws, s, a, k, false)?.value)
}

/// d/ds zeta(s, a).
pub fn hurwitz_zeta_ds(s: &APComplex, a: &APReal, ctx: &PrecisionContext) -> Result<APComplex> {
    let mut ws = ctx.workspace();
    let v = hurwitz_in(&mut ws, s, a, true)?;
    Ok(v.deriv.expect("derivative requested"))
}

/// zeta(s, a) together with its s-derivative, sharing one summation.
pub fn hurwitz_zeta_with_ds(
    s: &APComplex,
    a: &APReal,
    ctx: &PrecisionContext,
) -> Result<(APComplex, APComplex)> {
    let mut ws = ctx.workspace();
    let v = hurwitz_in(&mut ws, s, a, true)?;
    Ok((v.value, v.deriv.expect("derivative requested")))
}
