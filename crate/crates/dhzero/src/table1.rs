//! The published comparison table of four off-line points and two on-line zeros,
//! recomputed from its coordinates.

use dhzero_core::zeros::{classify_point, eval_record, EvalRecord};
use dhzero_core::{APReal, PrecisionContext, Result};
use serde_json::{json, Value};

use crate::output;

/// Relative tolerance for the per-cell agreement flags.
pub const AGREEMENT_TOL: f64 = 0.25;

/// Published threshold, used for the pseudo-zero score.
pub const PUBLISHED_KAPPA: &str = "1.21164";

#[derive(Debug, Clone, Copy)]
pub struct PublishedRow {
    pub name: &'static str,
    pub s: &'static str,
    pub f_abs: &'static str,
    pub f1s_abs: &'static str,
    pub ratio: &'static str,
    pub x_abs: &'static str,
    pub label: &'static str,
}

pub const ROWS: [PublishedRow; 6] = [
    PublishedRow {
        name: "s1",
        s: "0.808517+85.699348i",
        f_abs: "1.449e-219",
        f1s_abs: "5.416e-218",
        ratio: "0.02673",
        x_abs: "0.2272",
        label: "ApproximateOffLine",
    },
    PublishedRow {
        name: "s2",
        s: "0.574356+166.479306i",
        f_abs: "3.731e-205",
        f1s_abs: "1.036e-204",
        ratio: "0.3603",
        x_abs: "0.6954",
        label: "ApproximateOffLine",
    },
    PublishedRow {
        name: "s3",
        s: "0.650830+114.163343i",
        f_abs: "7.136e-208",
        f1s_abs: "4.772e-207",
        ratio: "0.1495",
        x_abs: "0.5066",
        label: "ApproximateOffLine",
    },
    PublishedRow {
        name: "s4",
        s: "0.724258+176.702461i",
        f_abs: "2.428e-224",
        f1s_abs: "5.495e-223",
        ratio: "0.0442",
        x_abs: "0.3298",
        label: "ApproximateOffLine",
    },
    PublishedRow {
        name: "z1",
        s: "0.5+14.404003i",
        f_abs: "3.729e-274",
        f1s_abs: "3.729e-274",
        ratio: "1.000",
        x_abs: "1.000",
        label: "StrictZeroOnLine",
    },
    PublishedRow {
        name: "z2",
        s: "0.5+23.345370i",
        f_abs: "2.935e-393",
        f1s_abs: "2.935e-393",
        ratio: "1.000",
        x_abs: "1.000",
        label: "StrictZeroOnLine",
    },
];

/// log10 of a published decimal such as `2.935e-393`.
pub fn published_log10(text: &str) -> f64 {
    let (mantissa, exponent) = text.split_once('e').unwrap_or((text, "0"));
    let m: f64 = mantissa.parse().expect("published mantissa");
    let e: f64 = exponent.parse().expect("published exponent");
    m.log10() + e
}

/// |computed - published| <= tol * |published|, compared in log space so
/// that magnitudes far below the f64 range still compare.
pub fn agrees(computed: &APReal, published: &str, tol: f64) -> bool {
    if computed.is_zero() {
        return false;
    }
    let ratio = 10f64.powf(computed.log10_abs() - published_log10(published));
    (ratio - 1.0).abs() <= tol
}

#[derive(Debug, Clone)]
pub struct RowResult {
    pub published: PublishedRow,
    pub record: EvalRecord,
    pub label: &'static str,
    pub score: APReal,
    pub refined: Option<EvalRecord>,
}

pub fn compute_row(row: &PublishedRow, ctx: &PrecisionContext, kappa: &APReal, classify: bool) -> Result<RowResult> {
    let s = ctx.parse_complex(row.s)?;
    let record = eval_record(&s, ctx)?;
    let (label, score, refined) = if classify {
        let c = classify_point(&s, ctx, kappa)?;
        (output::label_name(c.label), c.score, Some(c.evidence))
    } else {
        let score = dhzero_core::ratio::pseudo_zero_score(&s.re, &s.im, kappa)?;
        ("Unclassified", score, None)
    };
    Ok(RowResult {
        published: *row,
        record,
        label,
        score,
        refined,
    })
}

pub fn row_json(r: &RowResult, digits: u32) -> Value {
    let p = &r.published;
    let cell = |v: Option<&APReal>, published: &str| v.is_some_and(|v| agrees(v, published, AGREEMENT_TOL));
    json!({
        "name": p.name,
        "s": p.s,
        "computed": output::record(&r.record, digits),
        "published": {
            "f_abs": p.f_abs,
            "f1s_abs": p.f1s_abs,
            "ratio": p.ratio,
            "x_abs": p.x_abs,
            "classification": p.label,
        },
        "agrees": {
            "f_abs": cell(Some(&r.record.f_abs), p.f_abs),
            "f1s_abs": cell(Some(&r.record.f1s_abs), p.f1s_abs),
            "ratio": cell(r.record.ratio.as_ref(), p.ratio),
            "x_abs": cell(Some(&r.record.x_abs), p.x_abs),
            "classification": r.label == p.label,
        },
        "classification": r.label,
        "score": output::real(&r.score, digits),
        "refined": r.refined.as_ref().map(|e| output::record(e, digits)).unwrap_or(Value::Null),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreement_flag() {
        let bits = 256;
        assert!(agrees(&APReal::from_f64(0.2718, bits), "0.2272", 0.25));
        assert!(!agrees(&APReal::from_f64(0.30, bits), "0.2272", 0.25));
        assert!(!agrees(&APReal::zero(bits), "1.000", 0.25));
        let tiny = APReal::parse_with_bits("3.9e-393", bits).unwrap();
        assert!(agrees(&tiny, "2.935e-393", 0.4));
        assert!(!agrees(&tiny, "2.935e-393", 0.25));
    }
}
