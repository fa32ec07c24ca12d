use dhzero_core::dh::{f_eval, functional_equation_residual, x_eval, z_function};
use dhzero_core::ratio::{d_abs_x_dt_digamma, d_abs_x_dt_series, inversion_product, pseudo_zero_score};
use dhzero_core::specfun::{digamma, hurwitz_zeta, hurwitz_zeta_from, log_gamma};
use dhzero_core::{make_context, APComplex, APReal, PrecisionContext};
use proptest::prelude::*;

fn ctx() -> PrecisionContext {
    make_context(30).unwrap()
}

/// (re + i im) / 100.
fn point(ctx: &PrecisionContext, re: i64, im: i64) -> APComplex {
    let bits = ctx.binary_precision();
    APComplex::new(APReal::from_ratio(re, 100, bits), APReal::from_ratio(im, 100, bits))
}

/// Hundredths as a decimal literal.
fn dec(v: i64) -> String {
    format!("{}e-2", v)
}

fn close(a: &APComplex, b: &APComplex, rel: f64) -> bool {
    let scale = a.log10_abs().max(b.log10_abs()).max(0.0);
    (a - b).is_zero() || (a - b).log10_abs() - scale < rel
}

/// Away from the poles of X and the non-positive integers.
fn generic(re: i64, im: i64) -> bool {
    im.abs() >= 10 || (re % 100 != 0 && re > -700)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conjugate_symmetry(re in -300i64..400, im in -3000i64..3000) {
        prop_assume!(generic(re, im));
        let ctx = ctx();
        let s = point(&ctx, re, im);
        let sb = s.conj();
        let a = ctx.parse("0.35").unwrap();
        prop_assert!(close(&log_gamma(&sb, &ctx).unwrap(), &log_gamma(&s, &ctx).unwrap().conj(), -26.0));
        prop_assert!(close(&digamma(&sb, &ctx).unwrap(), &digamma(&s, &ctx).unwrap().conj(), -26.0));
        prop_assert!(close(&f_eval(&sb, &ctx).unwrap(), &f_eval(&s, &ctx).unwrap().conj(), -26.0));
        if re != 100 || im != 0 {
            prop_assert!(close(&hurwitz_zeta(&sb, &a, &ctx).unwrap(), &hurwitz_zeta(&s, &a, &ctx).unwrap().conj(), -26.0));
        }
        if let (Ok(x), Ok(xb)) = (x_eval(&s, &ctx), x_eval(&sb, &ctx)) {
            prop_assert!(close(&xb, &x.conj(), -26.0));
        }
    }

    #[test]
    fn hurwitz_recurrence(re in -1000i64..1000, im in -10000i64..10000, a in 1i64..=100) {
        // zeta(s, a) - zeta(s, a + 1) = a^-s
        prop_assume!(re != 100 || im != 0);
        let ctx = ctx();
        let s = point(&ctx, re, im);
        let a = ctx.parse(&dec(a)).unwrap();
        let lhs = &hurwitz_zeta(&s, &a, &ctx).unwrap() - &hurwitz_zeta_from(&s, &a, 1, &ctx).unwrap();
        let mut ws = ctx.workspace();
        let ln_a = ws.ln(&a);
        let rhs = ws.pow_neg_s(&ln_a, &s);
        prop_assert!(close(&lhs, &rhs, -24.0), "s = {}", s);
    }

    #[test]
    fn functional_equation_holds(re in -400i64..500, im in -5000i64..5000) {
        prop_assume!(generic(re, im));
        let ctx = ctx();
        let s = point(&ctx, re, im);
        let res = functional_equation_residual(&s, &ctx).unwrap();
        prop_assert!(res.log10_abs() < -15.0, "s = {}, residual = {}", s, res.to_decimal(5));
    }

    #[test]
    fn inversion_is_one(re in -400i64..500, im in -5000i64..5000) {
        prop_assume!(generic(re, im) && generic(100 - re, -im));
        let ctx = ctx();
        let s = point(&ctx, re, im);
        let p = inversion_product(&s, &ctx).unwrap();
        let one = APComplex::one(ctx.binary_precision());
        prop_assert!((&p - &one).log10_abs() < -25.0);
    }

    #[test]
    fn derivative_sign_law(re in -100i64..200, im in 50i64..2000) {
        // sign(d|X|/dt) = sign(1/2 - sigma) sign(t) off the line
        prop_assume!((re - 50).abs() >= 2);
        let ctx = ctx();
        for t in [im, -im] {
            let s = point(&ctx, re, t);
            let d = d_abs_x_dt_digamma(&s, &ctx).unwrap();
            let want = (50 - re).signum() * t.signum();
            prop_assert_eq!(d.value.signum() as i64, want, "s = {}", s);
            prop_assert!(d.im_leak.log10_abs() - d.value.log10_abs() < -20.0);
        }
    }

    #[test]
    fn series_and_digamma_derivatives_agree(re in -25i64..125, im in 50i64..800) {
        prop_assume!((re - 50).abs() >= 5);
        let ctx = ctx();
        let s = point(&ctx, re, im);
        let tol = ctx.parse("1e-8").unwrap();
        let a = d_abs_x_dt_digamma(&s, &ctx).unwrap().value;
        let b = d_abs_x_dt_series(&s, &tol, &ctx).unwrap();
        prop_assert!((&a - &b.value).log10_abs() < -7.5);
    }

    #[test]
    fn on_line_moduli_match(im in -5000i64..5000) {
        prop_assume!(im != 0);
        let ctx = ctx();
        let s = point(&ctx, 50, im);
        let one_minus = point(&ctx, 50, -im);
        let a = f_eval(&s, &ctx).unwrap().abs();
        let b = f_eval(&one_minus, &ctx).unwrap().abs();
        let scale = a.log10_abs().max(0.0);
        prop_assert!((&a - &b).is_zero() || (&a - &b).log10_abs() - scale < -25.0);
    }

    #[test]
    fn z_is_real(t in 0i64..10000) {
        let ctx = ctx();
        let t = ctx.parse(&dec(t)).unwrap();
        let (z, leak) = z_function(&t, &ctx).unwrap();
        prop_assert!(leak.is_zero() || leak.log10_abs() - z.log10_abs().max(0.0) < -24.0);
    }

    #[test]
    fn pseudo_score_decreases_in_t(re in -200i64..300, t in 0i64..4000, dt in 1i64..500) {
        prop_assume!(re != 50);
        let ctx = ctx();
        let sigma = ctx.parse(&dec(re)).unwrap();
        let kappa = ctx.parse("1.21164").unwrap();
        let a = pseudo_zero_score(&sigma, &ctx.parse(&dec(t)).unwrap(), &kappa).unwrap();
        let b = pseudo_zero_score(&sigma, &ctx.parse(&dec(t + dt)).unwrap(), &kappa).unwrap();
        prop_assert!(b < a);
        prop_assert!(a.to_f64() <= 1.0);
        let on_line = pseudo_zero_score(&ctx.parse("0.5").unwrap(), &ctx.parse(&dec(t)).unwrap(), &kappa).unwrap();
        prop_assert_eq!(on_line.to_decimal(10), "1");
    }

    #[test]
    fn decimal_round_trip(re in -100000i64..100000, im in -100000i64..100000) {
        let ctx = ctx();
        let s = point(&ctx, re, im);
        let text = s.to_decimal(30);
        let back = ctx.parse_complex(&text).unwrap();
        prop_assert_eq!(back.to_decimal(30), text);
        prop_assert_eq!(s.conj().conj().to_decimal(30), s.to_decimal(30));
    }

    #[test]
    fn evaluation_is_deterministic(re in -300i64..400, im in -3000i64..3000) {
        prop_assume!(generic(re, im));
        let ctx = ctx();
        let s = point(&ctx, re, im);
        let a = f_eval(&s, &ctx).unwrap();
        let b = f_eval(&s, &ctx).unwrap();
        prop_assert_eq!(a.to_decimal(40), b.to_decimal(40));
    }
}

#[test]
fn real_axis_values_are_real() {
    let ctx = ctx();
    for v in ["0.25", "3", "-2.5", "7.75"] {
        let s = ctx.parse_complex(v).unwrap();
        assert!(f_eval(&s, &ctx).unwrap().is_real());
    }
}
