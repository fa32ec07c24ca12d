use dhzero_core::dh::z_function;
use dhzero_core::kappa_curve::{implicit_curve_grid, kappa_solve, trace_segments, CurveBox, CurveGrid, GridSpec};
use dhzero_core::ratio::{monotonicity_scan, ratio_derivative_check, Direction};
use dhzero_core::zeros::{
    classify_point, eval_record, newton_refine, precision_escalation, scan_critical_line, Label, Trend,
};
use dhzero_core::{make_context, APReal, PrecisionContext};

fn r(ctx: &PrecisionContext, s: &str) -> APReal {
    ctx.parse(s).unwrap()
}

#[test]
fn brackets_survive_doubled_precision() {
    let ctx = make_context(30).unwrap();
    let hi = ctx.doubled();
    let brackets = scan_critical_line(&r(&ctx, "10"), &r(&ctx, "30"), &r(&ctx, "0.1"), &ctx).unwrap();
    for b in &brackets {
        let lo = z_function(&b.t_lo.with_precision(hi.binary_precision()), &hi).unwrap().0;
        let up = z_function(&b.t_hi.with_precision(hi.binary_precision()), &hi).unwrap().0;
        assert!(lo.signum() * up.signum() < 0);
    }
    let starts: Vec<String> = brackets.iter().map(|b| b.t_lo.to_decimal(10)).collect();
    assert!(starts.contains(&"14.4".to_string()));
    assert!(starts.contains(&"23.3".to_string()));
}

#[test]
fn refinement_is_stable() {
    let ctx = make_context(60).unwrap();
    let start = ctx.parse_complex("0.5+23.3i").unwrap();
    let first = newton_refine(&start, &ctx, 50, true).unwrap();
    assert!(first.converged);
    let again = newton_refine(&first.refined, &ctx, 50, true).unwrap();
    assert!(again.converged);
    let moved = (&again.refined - &first.refined).log10_abs();
    assert!(moved < -50.0, "moved 10^{moved}");
    assert!(first.refined.im.to_decimal(15).starts_with("23.34537011202"));
}

#[test]
fn classification_is_reproducible() {
    let ctx = make_context(40).unwrap();
    let kappa = r(&ctx, "1.21164");
    for s in ["0.5+14.404003i", "0.808517+85.699348i", "3+1i"] {
        let s = ctx.parse_complex(s).unwrap();
        let a = classify_point(&s, &ctx, &kappa).unwrap();
        let b = classify_point(&s, &ctx, &kappa).unwrap();
        assert_eq!(a.label, b.label);
        assert_eq!(a.score.to_decimal(30), b.score.to_decimal(30));
    }
    let off = classify_point(&ctx.parse_complex("3+1i").unwrap(), &ctx, &kappa).unwrap();
    assert_eq!(off.label, Label::NotZero);
}

#[test]
fn escalation_trends() {
    let line = precision_escalation(&make_context(30).unwrap().parse_complex("0.5+14.404i").unwrap(), &[40, 80, 120]).unwrap();
    assert_eq!(line.trend, Trend::GeometricDecrease);
    let far = precision_escalation(&make_context(30).unwrap().parse_complex("3").unwrap(), &[40, 80, 120]).unwrap();
    assert_eq!(far.trend, Trend::Plateau);
}

#[test]
fn record_ratio_matches_modulus() {
    let ctx = make_context(50).unwrap();
    for s in ["0.3+2i", "-1.5+7i", "2.25-4i"] {
        let rec = eval_record(&ctx.parse_complex(s).unwrap(), &ctx).unwrap();
        let ratio = rec.ratio.expect("ratio defined");
        assert!((&ratio - &rec.x_abs).log10_abs() - rec.x_abs.log10_abs() < -40.0, "s = {s}");
    }
}

#[test]
fn ratio_derivative_examples() {
    let ctx = make_context(60).unwrap();
    let h = r(&ctx, "1e-20");
    for s in ["0.2+3i", "0.9-6i", "-0.5+10i"] {
        let gap = ratio_derivative_check(&ctx.parse_complex(s).unwrap(), &h, &ctx).unwrap();
        assert!(gap.log10_abs() < -30.0, "s = {s}");
    }
}

#[test]
fn monotonicity_scans() {
    let ctx = make_context(30).unwrap();
    let (t0, t1) = (r(&ctx, "0.5"), r(&ctx, "20"));
    let left = monotonicity_scan(&r(&ctx, "0.2"), &t0, &t1, 40, &ctx).unwrap();
    assert_eq!(left.direction, Direction::Increasing);
    assert_eq!(left.violations, 0);
    let right = monotonicity_scan(&r(&ctx, "1.3"), &t0, &t1, 40, &ctx).unwrap();
    assert_eq!(right.direction, Direction::Decreasing);
    assert_eq!(right.violations, 0);
    let line = monotonicity_scan(&r(&ctx, "0.5"), &t0, &t1, 40, &ctx).unwrap();
    assert_eq!(line.direction, Direction::Constant);
    assert_eq!(line.violations, 0);
    assert!(monotonicity_scan(&r(&ctx, "0.2"), &t1, &t0, 40, &ctx).is_err());
}

#[test]
fn kappa_independent_of_epsilon() {
    let a = make_context(60).unwrap();
    let b = make_context(80).unwrap();
    let ka = kappa_solve(&r(&a, "1e-15"), &a).unwrap().kappa;
    let kb = kappa_solve(&r(&b, "1e-25"), &b).unwrap().kappa;
    assert!((&ka.with_precision(b.binary_precision()) - &kb).log10_abs() < -12.0);
    assert!(ka.to_decimal(12).starts_with("1.211635791"));
}

#[test]
fn grid_is_symmetric_in_t() {
    let ctx = make_context(30).unwrap();
    let bbox = CurveBox::parse("-1.5", "2.5", "-2", "2").unwrap();
    let grid = implicit_curve_grid(&bbox, (9, 11), &ctx).unwrap();
    let n_t = grid.spec.n_t;
    for j in 0..n_t {
        for i in 0..grid.spec.n_sigma {
            match (grid.value(i, j), grid.value(i, n_t - 1 - j)) {
                (Some(a), Some(b)) => assert!((a - b).is_zero() || (a - b).log10_abs() < -25.0),
                (None, None) => {}
                _ => panic!("mask not symmetric at ({i}, {j})"),
            }
        }
    }
}

fn dist_to_polylines(p: (f64, f64), lines: &[Vec<(f64, f64)>]) -> f64 {
    let mut best = f64::INFINITY;
    for line in lines {
        for w in line.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len2 = dx * dx + dy * dy;
            let u = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
            let (qx, qy) = (a.0 + u * dx - p.0, a.1 + u * dy - p.1);
            best = best.min((qx * qx + qy * qy).sqrt());
        }
        if line.len() == 1 {
            best = best.min(((line[0].0 - p.0).powi(2) + (line[0].1 - p.1).powi(2)).sqrt());
        }
    }
    best
}

fn as_f64(grid: &CurveGrid) -> Vec<Vec<(f64, f64)>> {
    grid.segments
        .iter()
        .map(|l| l.iter().map(|(s, t)| (s.to_f64(), t.to_f64())).collect())
        .collect()
}

#[test]
fn refining_the_grid_moves_segments_less_than_a_cell() {
    let ctx = make_context(30).unwrap();
    let bbox = CurveBox::parse("0.3", "0.7", "0.5", "2").unwrap();
    let coarse = implicit_curve_grid(&bbox, (9, 16), &ctx).unwrap();
    let fine = implicit_curve_grid(&bbox, (17, 31), &ctx).unwrap();
    let diag = (0.05f64.powi(2) + 0.1f64.powi(2)).sqrt();
    let (c, f) = (as_f64(&coarse), as_f64(&fine));
    assert!(!c.is_empty() && !f.is_empty());
    for p in f.iter().flatten() {
        assert!(dist_to_polylines(*p, &c) < diag, "{p:?}");
    }
    for p in c.iter().flatten() {
        assert!(dist_to_polylines(*p, &f) < diag, "{p:?}");
    }
}

#[test]
fn uniform_grid_has_no_segments() {
    let ctx = make_context(30).unwrap();
    let bbox = CurveBox::parse("2.2", "3.8", "0.5", "2.5").unwrap();
    let spec = GridSpec::new(bbox, 8, 8, ctx).unwrap();
    let values = vec![Some(r(&ctx, "0.75")); 64];
    let grid = CurveGrid::assemble(spec, values).unwrap();
    assert!(trace_segments(&grid).is_empty());
}

#[test]
fn critical_line_is_traced() {
    let ctx = make_context(30).unwrap();
    let bbox = CurveBox::parse("0.4", "0.6", "-2", "2").unwrap();
    let grid = implicit_curve_grid(&bbox, (9, 17), &ctx).unwrap();
    let on_line = grid
        .segments
        .iter()
        .flatten()
        .filter(|(s, _)| (s.to_f64() - 0.5).abs() < 1e-20)
        .count();
    assert!(on_line >= 17, "{on_line} points on sigma = 1/2");
}
