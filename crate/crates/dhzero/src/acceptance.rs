//! The nine acceptance criteria, shared by `dhzero selftest` and the
//! `acceptance` test target.

use std::fmt::Write as _;

use dhzero_core::dh::functional_equation_residual;
use dhzero_core::kappa_curve::{implicit_curve_grid, kappa_solve, CurveBox, DEFAULT_RESOLUTION};
use dhzero_core::ratio::{abs_x, d_abs_x_dt_digamma, d_abs_x_dt_series, inversion_product, pseudo_zero_score};
use dhzero_core::specfun::{digamma, euler_gamma, hurwitz_zeta, hurwitz_zeta_ds, hurwitz_zeta_from, log_gamma};
use dhzero_core::zeros::{classify_point, eval_record, newton_refine, scan_critical_line, DEFAULT_MAX_ITER};
use dhzero_core::{make_context, APComplex, APReal, PrecisionContext};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli;
use crate::output::label_name;
use crate::table1::{agrees, AGREEMENT_TOL, PUBLISHED_KAPPA, ROWS};

const EULER: &str = "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467";
const PI: &str = "3.141592653589793238462643383279502884197169399375105820974944592307816406286209";
const LN2: &str = "0.69314718055994530941723212145817656807550013436025525412068000949339362196969472";
const SQRT_PI: &str = "1.7724538509055160272981674833411451827975494561223871282138077898529112845910322";
const ZETA2: &str = "1.6449340668482264364724151666460251892189499012067984377355582293700074704032009";
const HALF_LN_2PI: &str = "0.9189385332046727417803297364056176398613974736377834128171515404827656959272604";

const KAPPA_PUBLISHED: f64 = 1.21164;
const PANEL_SEED: u64 = 0x5eed_0001;
const DERIV_SEED: u64 = 0x5eed_0003;

pub const NAMES: [&str; 9] = [
    "functional equation",
    "inversion symmetry",
    "derivative cross-validation",
    "special-function identities",
    "kappa threshold",
    "on-line zeros",
    "off-line point records",
    "implicit curve grid",
    "determinism across worker counts",
];

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        NAMES[self.id - 1]
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {} {verdict}: {}: {}", self.id, self.name(), self.detail)
    }
}

type Check = Result<(bool, String), String>;

/// Runs criterion `id` (1-based). Errors count as failures.
pub fn run(id: usize) -> Outcome {
    let result = match id {
        1 => functional_equation(),
        2 => inversion(),
        3 => derivatives(),
        4 => special_functions(),
        5 => kappa(),
        6 => on_line_zeros(),
        7 => offline_records(),
        8 => curve_grid(),
        9 => determinism(),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome { id, passed, detail }
}

fn ctx(digits: u32) -> Result<PrecisionContext, String> {
    make_context(digits).map_err(|e| e.to_string())
}

fn parse(ctx: &PrecisionContext, text: &str) -> Result<APReal, String> {
    ctx.parse(text).map_err(|e| e.to_string())
}

fn parse_c(ctx: &PrecisionContext, text: &str) -> Result<APComplex, String> {
    ctx.parse_complex(text).map_err(|e| e.to_string())
}

fn e<T>(r: dhzero_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn near_any(sigma: f64, t: f64, points: &[f64], radius: f64) -> bool {
    points.iter().any(|p| ((sigma - p).powi(2) + t * t).sqrt() < radius)
}

/// `n` points with sigma in [-3, 4] and |t| <= 50, avoiding disks of
/// radius 0.1 around the poles of X, the points where 1 - s is a pole,
/// and s = 0, 1.
pub fn panel(n: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(PANEL_SEED);
    let excluded = [2.0, 4.0, -1.0, -3.0, 0.0, 1.0];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let sigma: f64 = rng.gen_range(-3.0..=4.0);
        let t: f64 = rng.gen_range(-50.0..=50.0);
        if near_any(sigma, t, &excluded, 0.1) {
            continue;
        }
        out.push(format!("{sigma:.6}{t:+.6}i"));
    }
    out
}

/// Twenty points off the critical line for the derivative checks.
pub fn derivative_panel() -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(DERIV_SEED);
    let mut out = Vec::with_capacity(20);
    while out.len() < 20 {
        let sigma: f64 = rng.gen_range(-0.25..=1.25);
        let t: f64 = rng.gen_range(0.5..=15.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        if (sigma - 0.5).abs() < 0.05 {
            continue;
        }
        out.push(format!("{sigma:.6}{t:+.6}i"));
    }
    out
}

fn functional_equation() -> Check {
    let ctx = ctx(60)?;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = String::new();
    for text in panel(100) {
        let s = parse_c(&ctx, &text)?;
        let r = e(functional_equation_residual(&s, &ctx))?.log10_abs();
        if r > worst {
            worst = r;
            worst_at = text;
        }
    }
    Ok((worst < -45.0, format!("max log10 residual {worst:.1} at {worst_at} (< -45) over 100 points")))
}

fn inversion() -> Check {
    let ctx = ctx(60)?;
    let one = parse(&ctx, "1")?;
    let mut worst = f64::NEG_INFINITY;
    for text in panel(100) {
        let s = parse_c(&ctx, &text)?;
        let p = e(inversion_product(&s, &ctx))?;
        let d = p.add_real(&-&one).log10_abs();
        worst = worst.max(d);
    }
    Ok((worst < -50.0, format!("max log10 |X(s)X(1-s) - 1| {worst:.1} (< -50) over 100 points")))
}

fn derivatives() -> Check {
    let ctx = ctx(60)?;
    let tol = parse(&ctx, "5e-11")?;
    let h = parse(&ctx, "1e-20")?;
    let mut ok = true;
    let mut series_gap = f64::NEG_INFINITY;
    let mut fd_digits = f64::INFINITY;
    let mut sign_failures = 0;
    for text in derivative_panel() {
        let s = parse_c(&ctx, &text)?;
        let d = e(d_abs_x_dt_digamma(&s, &ctx))?;
        let series = e(d_abs_x_dt_series(&s, &tol, &ctx))?;
        series_gap = series_gap.max((&d.value - &series.value).log10_abs());

        let up = APComplex::new(s.re.clone(), &s.im + &h);
        let down = APComplex::new(s.re.clone(), &s.im - &h);
        let fd = (e(abs_x(&up, &ctx))? - e(abs_x(&down, &ctx))?) / h.mul_pow2(1);
        let rel = (&fd - &d.value).log10_abs() - d.value.log10_abs();
        fd_digits = fd_digits.min(-rel);

        let expected = (0.5 - s.re.to_f64()).signum() * s.im.to_f64().signum();
        if d.value.signum() as f64 != expected || series.value.signum() as f64 != expected {
            sign_failures += 1;
        }
    }
    ok &= series_gap < -10.0 && fd_digits >= 35.0 && sign_failures == 0;

    let mut on_line = f64::NEG_INFINITY;
    for k in 1..=40 {
        let s = parse_c(&ctx, &format!("0.5+{}i", k as f64 / 2.0))?;
        let d = e(d_abs_x_dt_digamma(&s, &ctx))?;
        on_line = on_line.max(d.value.log10_abs());
    }
    ok &= on_line <= -50.0;
    Ok((
        ok,
        format!(
            "series gap log10 {series_gap:.1} (< -10), finite-difference digits {fd_digits:.1} (>= 35), \
             sign failures {sign_failures}, on-line log10 max {on_line:.1} (<= -50)"
        ),
    ))
}

fn special_functions() -> Check {
    let ctx = ctx(60)?;
    let limit = -50.0;
    let mut report = String::new();
    let mut ok = true;
    let mut check = |name: &str, err: f64| {
        let _ = write!(report, "{name} {err:.1}, ");
        ok &= err <= limit;
    };
    let c = |t: &str| parse_c(&ctx, t);
    let r = |t: &str| parse(&ctx, t);

    let mut ws = ctx.workspace();
    let lg = e(log_gamma(&c("0.5")?, &ctx))?;
    let ln_sqrt_pi = ws.ln(&r(SQRT_PI)?);
    check("Gamma(1/2)", (&lg.re - &ln_sqrt_pi).log10_abs().max(lg.im.log10_abs()));
    let psi1 = e(digamma(&c("1")?, &ctx))?;
    check("Psi(1)", (&psi1.re + &r(EULER)?).log10_abs());
    let psi_half = e(digamma(&c("0.5")?, &ctx))?;
    let want = -(&r(EULER)? + &r(LN2)?.mul_pow2(1));
    check("Psi(1/2)", (&psi_half.re - &want).log10_abs());
    check("gamma", (&euler_gamma(&ctx) - &r(EULER)?).log10_abs());
    let z2 = e(hurwitz_zeta(&c("2")?, &r("1")?, &ctx))?;
    check("zeta(2,1)", (&z2.re - &r(ZETA2)?).log10_abs());
    let pi = r(PI)?;
    check("pi^2/6", (&(&pi.sqr() / &r("6")?) - &r(ZETA2)?).log10_abs());
    let mut zeta0 = f64::NEG_INFINITY;
    for a in ["0.2", "0.4", "0.6", "0.8", "1"] {
        let z = e(hurwitz_zeta(&c("0")?, &r(a)?, &ctx))?;
        let want = &r("0.5")? - &r(a)?;
        zeta0 = zeta0.max((&z.re - &want).log10_abs());
    }
    check("zeta(0,a)", zeta0);
    let zm1 = e(hurwitz_zeta(&c("-1")?, &r("0.2")?, &ctx))?;
    check("zeta(-1,1/5)", (&zm1.re + &(&r("1")? / &r("300")?)).log10_abs());
    let d0 = e(hurwitz_zeta_ds(&c("0")?, &r("1")?, &ctx))?;
    check("zeta'(0,1)", (&d0.re + &r(HALF_LN_2PI)?).log10_abs());
    let mut recur = f64::NEG_INFINITY;
    for (s, a) in [("2.5+1i", "0.2"), ("-3.5+7i", "0.6"), ("0.5+40i", "0.9")] {
        let s = c(s)?;
        let a = r(a)?;
        let z0 = e(hurwitz_zeta(&s, &a, &ctx))?;
        let z1 = e(hurwitz_zeta_from(&s, &a, 1, &ctx))?;
        let ln_a = ws.ln(&a);
        let power = ws.pow_neg_s(&ln_a, &s);
        let gap = (&(&z0 - &z1) - &power).log10_abs() - z0.log10_abs().max(0.0);
        recur = recur.max(gap);
    }
    check("recurrence", recur);
    let detail = format!("log10 errors: {}limit {limit}", report);
    Ok((ok, detail))
}

fn kappa() -> Check {
    let a = e(kappa_solve(&parse(&ctx(140)?, "1e-50")?, &ctx(140)?))?;
    let b = e(kappa_solve(&parse(&ctx(100)?, "1e-30")?, &ctx(100)?))?;
    let ka = a.kappa.to_f64();
    let kb = b.kappa.to_f64();
    let ok = (ka - KAPPA_PUBLISHED).abs() <= 1e-5 && (ka - kb).abs() <= 1e-5;
    Ok((
        ok,
        format!(
            "kappa(1e-50) = {}, kappa(1e-30) = {}, |kappa - {KAPPA_PUBLISHED}| = {:.2e}, runs differ by {:.2e}",
            a.kappa.to_decimal(20),
            b.kappa.to_decimal(20),
            (ka - KAPPA_PUBLISHED).abs(),
            (ka - kb).abs()
        ),
    ))
}

fn on_line_zeros() -> Check {
    let low = ctx(60)?;
    let high = ctx(200)?;
    let step = parse(&low, "0.1")?;
    let mut ok = true;
    let mut detail = String::new();
    for (t0, t1, want) in [("14", "15", 14.404003), ("23", "24", 23.345370)] {
        let bs = e(scan_critical_line(&parse(&low, t0)?, &parse(&low, t1)?, &step, &low))?;
        if bs.len() != 1 {
            ok = false;
            let _ = write!(detail, "[{t0}, {t1}]: {} brackets; ", bs.len());
            continue;
        }
        let mid = (&bs[0].t_lo + &bs[0].t_hi).mul_pow2(-1);
        let mut mags = Vec::new();
        for (c, limit) in [(&low, -40.0), (&high, -180.0)] {
            let start = APComplex::new(parse(c, "0.5")?, mid.clone());
            let z = e(newton_refine(&start, c, DEFAULT_MAX_ITER, true))?;
            let t = z.refined.im.to_f64();
            let mag = z.f_abs_at_refined.log10_abs();
            ok &= z.converged && (t - want).abs() < 1e-5 && mag < limit;
            mags.push(format!("{mag:.1}"));
            if c.decimal_digits() == 200 {
                let _ = write!(detail, "t = {} ", z.refined.im.to_decimal(15));
            }
        }
        let _ = write!(detail, "log10|f| at 60/200 digits {} (< -40, < -180); ", mags.join("/"));
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

fn offline_records() -> Check {
    let high = ctx(200)?;
    let low = ctx(60)?;
    let kappa = parse(&low, PUBLISHED_KAPPA)?;
    let mut ok = true;
    let mut detail = String::new();
    for row in &ROWS[..4] {
        let s = parse_c(&high, row.s)?;
        let rec = e(eval_record(&s, &high))?;
        let gap = match &rec.ratio {
            Some(r) => (r - &rec.x_abs).log10_abs(),
            None => f64::INFINITY,
        };
        ok &= gap < -180.0;
        let flag = agrees(&rec.x_abs, row.x_abs, AGREEMENT_TOL);
        let class = e(classify_point(&parse_c(&low, row.s)?, &low, &kappa))?;
        let score = e(pseudo_zero_score(&s.re, &s.im, &kappa))?;
        let _ = write!(
            detail,
            "{}: |X| {} vs {} agree={flag}, ratio gap log10 {gap:.1}, {}, score {}; ",
            row.name,
            rec.x_abs.to_decimal(5),
            row.x_abs,
            label_name(class.label),
            score.to_decimal(3)
        );
        if row.name == "s1" {
            ok &= (score.to_f64() / 3.3e-10 - 1.0).abs() < 0.05;
        }
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

fn curve_grid() -> Check {
    let c = ctx(60)?;
    let grid = e(implicit_curve_grid(&CurveBox::default_box(), DEFAULT_RESOLUTION, &c))?;
    let spec = &grid.spec;
    let half_col = (0..spec.n_sigma)
        .find(|&i| spec.sigma(i).to_decimal(10) == "0.5")
        .ok_or("no node column on sigma = 1/2")?;
    let mut line_max = f64::NEG_INFINITY;
    for j in 0..spec.n_t {
        let v = grid.value(half_col, j).ok_or("masked node on the critical line")?;
        line_max = line_max.max(v.log10_abs());
    }
    let line_ok = line_max <= -50.0;

    let singular = [-5i64, -3, -1, 2, 4, 6];
    let mut expected = vec![false; grid.masked.len()];
    for (i, j) in (0..spec.n_sigma - 1).flat_map(|i| (0..spec.n_t - 1).map(move |j| (i, j))) {
        let (s0, s1) = (spec.sigma_exact(i), spec.sigma_exact(i + 1));
        let (t0, t1) = (spec.t_exact(j), spec.t_exact(j + 1));
        let zero = num_zero(&t0, &t1);
        expected[j * (spec.n_sigma - 1) + i] = zero
            && singular.iter().any(|&p| {
                let p = BigRational::from_integer(BigInt::from(p));
                s0 <= p && p <= s1
            });
    }
    let masked_count = grid.masked.iter().filter(|m| **m).count();
    let mask_ok = grid.masked == expected;

    let kappa = e(kappa_solve(&parse(&c, "1e-15")?, &c))?.kappa.to_f64();
    let cell_height = 6.0 / (spec.n_t as f64 - 1.0);
    let apex = grid.apex(1).map(|a| a.to_f64());
    let apex_ok = apex.is_some_and(|a| (a - kappa).abs() <= cell_height);
    Ok((
        line_ok && mask_ok && apex_ok,
        format!(
            "on-line log10 max {line_max:.1}, {masked_count} masked cells match={mask_ok}, apex {} vs kappa {kappa:.6} (cell height {cell_height})",
            apex.map_or("none".into(), |a| format!("{a:.6}"))
        ),
    ))
}

fn num_zero(t0: &BigRational, t1: &BigRational) -> bool {
    let zero = BigRational::zero();
    t0 <= &zero && &zero <= t1
}

fn determinism() -> Check {
    let runs: [&[&str]; 2] = [
        &["scan", "14", "15", "--step", "0.1", "--digits", "30"],
        &["curve", "--box", "0.3,0.7,-1.5,1.5", "--res", "12,16", "--digits", "30", "--format", "csv"],
    ];
    let mut ok = true;
    let mut detail = String::new();
    for args in runs {
        let mut outputs = Vec::new();
        for w in ["1", "2", "8"] {
            let mut argv: Vec<String> = vec!["dhzero".into()];
            argv.extend(args.iter().map(|a| a.to_string()));
            argv.extend(["--workers".into(), w.into()]);
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = cli::run(argv, &mut out, &mut err);
            if code != 0 {
                return Err(format!("{} exited {code}: {}", args[0], String::from_utf8_lossy(&err)));
            }
            outputs.push(out);
        }
        let same = outputs.windows(2).all(|w| w[0] == w[1]);
        ok &= same;
        let _ = write!(detail, "{} identical for workers 1/2/8: {same} ({} bytes); ", args[0], outputs[0].len());
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}
