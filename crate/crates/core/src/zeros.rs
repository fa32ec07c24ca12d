//! Locating, refining and classifying zeros of f.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dh::{as_integer, f_in, is_pole_of_x, x_in, z_in};
use crate::error::{Error, Result};
use crate::precision::{APComplex, APReal, PrecisionContext, Workspace};
use crate::ratio::pseudo_zero_score;

/// Largest distance from the start that Newton may wander before the run
/// is abandoned.
pub const TRUST_RADIUS: i64 = 1;
/// Step halvings tried when a full Newton step does not reduce |f|.
pub const MAX_DAMPING: u32 = 10;

/// One row of the functional-equation table at a point.
#[derive(Debug, Clone)]
pub struct EvalRecord {
    pub s: APComplex,
    pub f_abs: APReal,
    /// |f(1 - s)|.
    pub f1s_abs: APReal,
    /// f_abs / f1s_abs, None when f1s_abs is exactly zero.
    pub ratio: Option<APReal>,
    pub x_abs: APReal,
    pub residual: APReal,
    pub digits: u32,
}

pub(crate) fn eval_record_in(ws: &mut Workspace, s: &APComplex) -> Result<EvalRecord> {
    let s = ws.cround(s);
    if matches!(as_integer(&s), Some(0) | Some(1)) {
        return Err(Error::ExcludedPoint(s.to_decimal(20)));
    }
    let one_minus = (-&s).add_real(&ws.int(1));
    let x = x_in(ws, &s)?;
    let fs = f_in(ws, &s, false)?.value;
    let f1 = f_in(ws, &one_minus, false)?.value;
    let f_abs = fs.abs();
    let f1s_abs = f1.abs();
    let rhs = &x * &f1;
    let floor = ws.pow10(-(ws.ctx().decimal_digits() as i64));
    let rhs_abs = rhs.abs();
    let den = f_abs.max_abs(&rhs_abs).max_abs(&floor).clone();
    let residual = (&fs - &rhs).abs() / den;
    let ratio = (!f1s_abs.is_zero()).then(|| &f_abs / &f1s_abs);
    Ok(EvalRecord {
        s,
        f_abs,
        f1s_abs,
        ratio,
        x_abs: x.abs(),
        residual,
        digits: ws.ctx().decimal_digits(),
    })
}

/// |f(s)|, |f(1-s)|, their ratio, |X(s)| and the functional-equation
/// residual at s.
pub fn eval_record(s: &APComplex, ctx: &PrecisionContext) -> Result<EvalRecord> {
    let mut ws = ctx.workspace();
    eval_record_in(&mut ws, s)
}

/// Why a Newton run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    Converged,
    MaxIterations,
    /// The iterate moved further than [`TRUST_RADIUS`] from the start.
    LeftTrustRegion,
    /// Ten halvings of the step failed to reduce |f|.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct NewtonStep {
    pub point: APComplex,
    pub f_abs: APReal,
    pub step: APReal,
    /// Damping factor 2^-k applied to the Newton step.
    pub halvings: u32,
}

#[derive(Debug, Clone)]
pub struct ZeroCandidate {
    pub start: APComplex,
    pub refined: APComplex,
    pub iterations: u32,
    pub final_step: APReal,
    pub f_abs_at_refined: APReal,
    pub converged: bool,
    pub stop: StopReason,
    pub constrained: bool,
    pub trace: Vec<NewtonStep>,
}

/// Evaluation along the Newton path: complex f or real Z on the line.
trait Target {
    type P: Clone;
    fn eval(&self, ws: &mut Workspace, p: &Self::P) -> Result<(Self::P, APReal)>;
    fn sub(&self, a: &Self::P, b: &Self::P) -> Self::P;
    fn norm(&self, p: &Self::P) -> APReal;
    fn scale_pow2(&self, p: &Self::P, k: i32) -> Self::P;
    fn to_s(&self, ws: &Workspace, p: &Self::P) -> APComplex;
}

struct Complex;

impl Target for Complex {
    type P = APComplex;
    fn eval(&self, ws: &mut Workspace, p: &APComplex) -> Result<(APComplex, APReal)> {
        let v = f_in(ws, p, true)?;
        let d = v.deriv.expect("derivative requested");
        let d_abs = d.abs();
        underflow(ws, p, &d_abs)?;
        if v.value.is_zero() {
            return Ok((APComplex::zero(ws.bits()), APReal::zero(ws.bits())));
        }
        Ok((&v.value / &d, v.value.abs()))
    }
    fn sub(&self, a: &APComplex, b: &APComplex) -> APComplex {
        a - b
    }
    fn norm(&self, p: &APComplex) -> APReal {
        p.abs()
    }
    fn scale_pow2(&self, p: &APComplex, k: i32) -> APComplex {
        p.mul_pow2(k)
    }
    fn to_s(&self, _ws: &Workspace, p: &APComplex) -> APComplex {
        p.clone()
    }
}

struct OnLine;

impl Target for OnLine {
    type P = APReal;
    fn eval(&self, ws: &mut Workspace, t: &APReal) -> Result<(APReal, APReal)> {
        let z = z_in(ws, t, true)?;
        let d = z.derivative.expect("derivative requested");
        underflow(ws, &self.to_s(ws, t), &d.abs())?;
        if z.value.is_zero() {
            return Ok((APReal::zero(ws.bits()), APReal::zero(ws.bits())));
        }
        Ok((&z.value / &d, z.value.abs()))
    }
    fn sub(&self, a: &APReal, b: &APReal) -> APReal {
        a - b
    }
    fn norm(&self, p: &APReal) -> APReal {
        p.abs()
    }
    fn scale_pow2(&self, p: &APReal, k: i32) -> APReal {
        p.mul_pow2(k)
    }
    fn to_s(&self, ws: &Workspace, t: &APReal) -> APComplex {
        APComplex::new(ws.ratio(1, 2), t.clone())
    }
}

fn underflow(ws: &Workspace, p: &APComplex, d_abs: &APReal) -> Result<()> {
    if d_abs.log10_abs() < -(ws.ctx().decimal_digits() as f64) {
        return Err(Error::DerivativeUnderflow {
            at: p.to_decimal(20),
            magnitude: d_abs.to_decimal(6),
        });
    }
    Ok(())
}

fn newton<T: Target>(
    target: &T,
    ws: &mut Workspace,
    start_s: &APComplex,
    start: T::P,
    max_iter: u32,
    constrained: bool,
) -> Result<ZeroCandidate> {
    let tol = ws.pow10(-(ws.ctx().decimal_digits() as i64 - 10));
    let radius = ws.int(TRUST_RADIUS);
    let mut p = start.clone();
    let (mut step, mut f_abs) = target.eval(ws, &p)?;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut last_step = APReal::zero(ws.bits());
    let stop = loop {
        let step_norm = target.norm(&step);
        if step_norm <= tol {
            // the last correction is already below tolerance: apply it
            p = target.sub(&p, &step);
            last_step = step_norm;
            let (_, fa) = target.eval(ws, &p)?;
            f_abs = fa;
            break StopReason::Converged;
        }
        if iterations >= max_iter {
            break StopReason::MaxIterations;
        }
        iterations += 1;
        let mut halvings = 0;
        let accepted = loop {
            let trial_step = target.scale_pow2(&step, -(halvings as i32));
            let trial = target.sub(&p, &trial_step);
            if target.norm(&target.sub(&trial, &start)) > radius {
                break None;
            }
            let (next_step, next_abs) = target.eval(ws, &trial)?;
            if next_abs < f_abs || halvings >= MAX_DAMPING {
                let improved = next_abs < f_abs;
                break Some((trial, trial_step, next_step, next_abs, improved));
            }
            halvings += 1;
        };
        let Some((trial, trial_step, next_step, next_abs, improved)) = accepted else {
            break StopReason::LeftTrustRegion;
        };
        last_step = target.norm(&trial_step);
        trace.push(NewtonStep {
            point: target.to_s(ws, &trial),
            f_abs: next_abs.clone(),
            step: last_step.clone(),
            halvings,
        });
        p = trial;
        step = next_step;
        f_abs = next_abs;
        if !improved && last_step > tol {
            break StopReason::Stalled;
        }
    };
    let converged = stop == StopReason::Converged;
    Ok(ZeroCandidate {
        start: start_s.clone(),
        refined: target.to_s(ws, &p),
        iterations,
        final_step: last_step,
        f_abs_at_refined: f_abs,
        converged,
        stop,
        constrained,
        trace,
    })
}

pub(crate) fn newton_refine_in(
    ws: &mut Workspace,
    start: &APComplex,
    max_iter: u32,
    constrain_to_line: bool,
) -> Result<ZeroCandidate> {
    if max_iter == 0 {
        return Err(Error::Domain("newton_refine needs max_iter >= 1".into()));
    }
    let start = ws.cround(start);
    if constrain_to_line {
        newton(&OnLine, ws, &start, start.im.clone(), max_iter, true)
    } else {
        newton(&Complex, ws, &start, start.clone(), max_iter, false)
    }
}

/// Damped Newton iteration for a zero of f from `start`.
///
/// With `constrain_to_line` the iteration runs on Z(t) with sigma fixed at
/// 1/2. The run stops when the step is at most 10^-(digits - 10); a run
/// that hits `max_iter`, stalls or leaves the unit disk around the start is
/// returned with `converged = false`.
pub fn newton_refine(
    start: &APComplex,
    ctx: &PrecisionContext,
    max_iter: u32,
    constrain_to_line: bool,
) -> Result<ZeroCandidate> {
    let mut ws = ctx.workspace();
    newton_refine_in(&mut ws, start, max_iter, constrain_to_line)
}

/// Default iteration cap for refinement inside classification and
/// escalation.
pub const DEFAULT_MAX_ITER: u32 = 50;

#[derive(Debug, Clone)]
pub struct Bracket {
    pub t_lo: APReal,
    pub t_hi: APReal,
}

/// Sample abscissae t0, t0 + step, ... up to t1, with t1 itself appended
/// when the last step falls short of it. Empty when t0 > t1.
pub fn scan_points(t0: &APReal, t1: &APReal, step: &APReal, ctx: &PrecisionContext) -> Result<Vec<APReal>> {
    if !step.is_positive() {
        return Err(Error::Domain(format!("scan step must be positive, got {}", step.to_decimal(20))));
    }
    if t0 > t1 {
        return Err(Error::Domain(format!(
            "scan needs t0 <= t1, got {} > {}",
            t0.to_decimal(20),
            t1.to_decimal(20)
        )));
    }
    let ws = ctx.workspace();
    let (t0, t1, step) = (ws.round(t0), ws.round(t1), ws.round(step));
    let count = ((&t1 - &t0) / &step).floor().to_f64() as i64;
    let mut ts: Vec<APReal> = (0..=count).map(|k| &t0 + &(&step * &ws.int(k))).collect();
    if let Some(last) = ts.last() {
        if last < &t1 {
            ts.push(t1);
        }
    }
    Ok(ts)
}

/// Z(t) at each abscissa.
pub fn sample_z(ts: &[APReal], ctx: &PrecisionContext) -> Result<Vec<APReal>> {
    let mut ws = ctx.workspace();
    ts.iter().map(|t| Ok(z_in(&mut ws, t, false)?.value)).collect()
}

/// Adjacent sample pairs with opposite signs. A sample that is exactly
/// zero forms a bracket with its right neighbour.
pub fn brackets_from_samples(ts: &[APReal], zs: &[APReal]) -> Vec<Bracket> {
    let mut out = Vec::new();
    for k in 0..ts.len().saturating_sub(1) {
        let (a, b) = (zs[k].signum(), zs[k + 1].signum());
        if a * b < 0 || a == 0 {
            out.push(Bracket {
                t_lo: ts[k].clone(),
                t_hi: ts[k + 1].clone(),
            });
        }
    }
    out
}

/// Sign changes of Z(t) on the sample grid t0, t0 + step, ..., t1.
pub fn scan_critical_line(
    t0: &APReal,
    t1: &APReal,
    step: &APReal,
    ctx: &PrecisionContext,
) -> Result<Vec<Bracket>> {
    let ts = scan_points(t0, t1, step, ctx)?;
    let zs = sample_z(&ts, ctx)?;
    Ok(brackets_from_samples(&ts, &zs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    StrictZeroOnLine,
    ApproximateOffLine,
    NotZero,
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub label: Label,
    pub evidence: EvalRecord,
    /// exp(-|sigma - 1/2| |t| / kappa) at the evidence point.
    pub score: APReal,
    pub refinement: Option<ZeroCandidate>,
}

/// log10 of the line tolerance 10^-(digits/2).
pub fn line_tolerance_log10(ctx: &PrecisionContext) -> f64 {
    -(ctx.decimal_digits() as f64) / 2.0
}

/// log10 of the zero threshold 10^-(0.8 digits).
pub fn zero_threshold_log10(ctx: &PrecisionContext) -> f64 {
    -0.8 * ctx.decimal_digits() as f64
}

fn near_line(ws: &Workspace, s: &APComplex) -> bool {
    let d = (&s.re - &ws.ratio(1, 2)).abs();
    d.log10_abs() <= line_tolerance_log10(ws.ctx())
}

/// Refines s (on the line when it starts within the line tolerance),
/// evaluates the table row at the result and labels it.
pub fn classify_point(s: &APComplex, ctx: &PrecisionContext, kappa: &APReal) -> Result<Classification> {
    let mut ws = ctx.workspace();
    let s = ws.cround(s);
    let threshold = zero_threshold_log10(ctx);
    let constrained = near_line(&ws, &s);
    let refinement = match newton_refine_in(&mut ws, &s, DEFAULT_MAX_ITER, constrained) {
        Ok(c) => Some(c),
        Err(Error::DerivativeUnderflow { .. }) => None,
        Err(e) => return Err(e),
    };
    let point = match &refinement {
        Some(c) if c.converged && !is_pole_of_x(&c.refined) => c.refined.clone(),
        _ => s.clone(),
    };
    let evidence = eval_record_in(&mut ws, &point)?;
    let small = evidence.f_abs.log10_abs() <= threshold;
    let converged = refinement.as_ref().is_some_and(|c| c.converged);
    let label = match (converged, small) {
        (true, true) if near_line(&ws, &point) => Label::StrictZeroOnLine,
        (true, true) => Label::ApproximateOffLine,
        (_, false) => Label::NotZero,
        (false, true) => Label::Indeterminate,
    };
    let score = pseudo_zero_score(&point.re, &point.im, kappa)?;
    Ok(Classification {
        label,
        evidence,
        score,
        refinement,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trend {
    /// |f| falls by more than a quarter of a decade per extra digit.
    GeometricDecrease,
    /// |f| moves by less than a decade between runs.
    Plateau,
    Mixed,
}

#[derive(Debug, Clone)]
pub struct EscalationEntry {
    pub digits: u32,
    pub candidate: ZeroCandidate,
}

#[derive(Debug, Clone)]
pub struct EscalationReport {
    pub start: APComplex,
    pub entries: Vec<EscalationEntry>,
    pub trend: Trend,
    /// Least-squares slope of -log10|f| against digits.
    pub rate: f64,
}

/// Trend of log10|f| across ascending precisions.
pub fn classify_trend(points: &[(u32, f64)]) -> (Trend, f64) {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .map(|(d, l)| (*d as f64, if l.is_finite() { *l } else { -(*d as f64) * 2.0 }))
        .collect();
    let n = finite.len() as f64;
    let rate = if finite.len() >= 2 {
        let mx = finite.iter().map(|p| p.0).sum::<f64>() / n;
        let my = finite.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = finite.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = finite.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        if sxx > 0.0 {
            -sxy / sxx
        } else {
            0.0
        }
    } else {
        0.0
    };
    let pairs: Vec<(f64, f64)> = finite
        .windows(2)
        .map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
        .collect();
    let trend = if pairs.is_empty() {
        Trend::Mixed
    } else if pairs.iter().all(|(dd, dl)| -dl > dd / 4.0) {
        Trend::GeometricDecrease
    } else if pairs.iter().all(|(_, dl)| dl.abs() < 1.0) {
        Trend::Plateau
    } else {
        Trend::Mixed
    };
    (trend, rate)
}

/// Re-refines from s at each precision and reports how |f| at the refined
/// point scales with the digit count.
pub fn precision_escalation(s: &APComplex, digits_list: &[u32]) -> Result<EscalationReport> {
    if digits_list.is_empty() || digits_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("digits list must be non-empty and strictly ascending".into()));
    }
    let first = PrecisionContext::new(digits_list[0])?;
    let constrained = near_line(&first.workspace(), s);
    let mut entries = Vec::new();
    for &d in digits_list {
        let ctx = PrecisionContext::new(d)?;
        let candidate = newton_refine(s, &ctx, DEFAULT_MAX_ITER, constrained)?;
        entries.push(EscalationEntry { digits: d, candidate });
    }
    let points: Vec<(u32, f64)> = entries
        .iter()
        .map(|e| (e.digits, e.candidate.f_abs_at_refined.log10_abs()))
        .collect();
    let (trend, rate) = classify_trend(&points);
    Ok(EscalationReport {
        start: s.clone(),
        entries,
        trend,
        rate,
    })
}

impl PartialEq for Bracket {
    fn eq(&self, other: &Self) -> bool {
        self.t_lo.partial_cmp(&other.t_lo) == Some(Ordering::Equal)
            && self.t_hi.partial_cmp(&other.t_hi) == Some(Ordering::Equal)
    }
}
