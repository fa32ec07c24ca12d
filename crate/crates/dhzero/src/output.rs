//! JSON envelope, error objects and the text/CSV renderers.
//!
//! Every number leaves the process as a decimal string.

use dhzero_core::kappa_curve::{CurveGrid, KappaResult, Polyline};
use dhzero_core::ratio::{DerivativeValue, MonotonicityReport};
use dhzero_core::zeros::{
    Bracket, Classification, EscalationReport, EvalRecord, Label, StopReason, Trend, ZeroCandidate,
};
use dhzero_core::{APComplex, APReal, Error};
use serde_json::{json, Map, Value};

pub const TOOL: &str = "dhzero";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn real(x: &APReal, digits: u32) -> Value {
    Value::String(x.to_decimal(digits))
}

pub fn complex(z: &APComplex, digits: u32) -> Value {
    json!({ "re": z.re.to_decimal(digits), "im": z.im.to_decimal(digits) })
}

/// The fixed header of every JSON document.
pub fn envelope(command: &str, digits: Value, input: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), TOOL.into());
    m.insert("version".into(), VERSION.into());
    m.insert("command".into(), command.into());
    m.insert("digits".into(), digits);
    m.insert("input".into(), input);
    m
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::PrecisionTooLow { .. } => "PrecisionTooLow",
        Error::Parse { .. } => "ParseError",
        Error::Pole { .. } => "PoleError",
        Error::Domain(_) => "DomainError",
        Error::TolTooTight(_) => "TolTooTight",
        Error::ExcludedPoint(_) => "ExcludedPoint",
        Error::PoleOfX(_) => "PoleOfX",
        Error::DivideByZero(_) => "DivideByZero",
        Error::DerivativeUnderflow { .. } => "DerivativeUnderflow",
        Error::NoRootInBracket(_) => "NoRootInBracket",
        Error::PrecisionUnreachable(_) => "PrecisionUnreachable",
    }
}

pub fn error_object(kind: &str, message: &str) -> Value {
    json!({ "kind": kind, "message": message })
}

pub fn record(r: &EvalRecord, digits: u32) -> Value {
    json!({
        "s": complex(&r.s, digits),
        "f_abs": real(&r.f_abs, digits),
        "f1s_abs": real(&r.f1s_abs, digits),
        "ratio": r.ratio.as_ref().map(|v| real(v, digits)).unwrap_or(Value::Null),
        "x_abs": real(&r.x_abs, digits),
        "residual": real(&r.residual, digits),
        "digits": r.digits.to_string(),
    })
}

pub fn stop_name(s: StopReason) -> &'static str {
    match s {
        StopReason::Converged => "Converged",
        StopReason::MaxIterations => "MaxIterations",
        StopReason::LeftTrustRegion => "LeftTrustRegion",
        StopReason::Stalled => "Stalled",
    }
}

pub fn label_name(l: Label) -> &'static str {
    match l {
        Label::StrictZeroOnLine => "StrictZeroOnLine",
        Label::ApproximateOffLine => "ApproximateOffLine",
        Label::NotZero => "NotZero",
        Label::Indeterminate => "Indeterminate",
    }
}

pub fn trend_name(t: Trend) -> &'static str {
    match t {
        Trend::GeometricDecrease => "GeometricDecrease",
        Trend::Plateau => "Plateau",
        Trend::Mixed => "Mixed",
    }
}

pub fn candidate(c: &ZeroCandidate, digits: u32) -> Value {
    let trace: Vec<Value> = c
        .trace
        .iter()
        .map(|st| {
            json!({
                "point": complex(&st.point, digits),
                "f_abs": real(&st.f_abs, digits),
                "step": real(&st.step, digits),
                "halvings": st.halvings.to_string(),
            })
        })
        .collect();
    json!({
        "start": complex(&c.start, digits),
        "refined": complex(&c.refined, digits),
        "iterations": c.iterations.to_string(),
        "final_step": real(&c.final_step, digits),
        "f_abs_at_refined": real(&c.f_abs_at_refined, digits),
        "converged": c.converged,
        "stop": stop_name(c.stop),
        "constrained": c.constrained,
        "trace": trace,
    })
}

pub fn classification(c: &Classification, digits: u32) -> Value {
    json!({
        "label": label_name(c.label),
        "score": real(&c.score, digits),
        "evidence": record(&c.evidence, digits),
        "refinement": c.refinement.as_ref().map(|r| candidate(r, digits)).unwrap_or(Value::Null),
    })
}

pub fn brackets(bs: &[Bracket], digits: u32) -> Value {
    Value::Array(
        bs.iter()
            .map(|b| json!({ "t_lo": real(&b.t_lo, digits), "t_hi": real(&b.t_hi, digits) }))
            .collect(),
    )
}

pub fn escalation(r: &EscalationReport) -> Value {
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| {
            json!({
                "digits": e.digits.to_string(),
                "candidate": candidate(&e.candidate, e.digits),
            })
        })
        .collect();
    let digits = r.entries.first().map_or(30, |e| e.digits);
    json!({
        "start": complex(&r.start, digits),
        "entries": entries,
        "trend": trend_name(r.trend),
        "rate": format!("{:.6}", r.rate),
    })
}

pub fn kappa(k: &KappaResult, digits: u32) -> Value {
    json!({
        "kappa": real(&k.kappa, digits),
        "epsilon": real(&k.epsilon, digits),
        "bracket": [real(&k.bracket.0, digits), real(&k.bracket.1, digits)],
        "residual": real(&k.residual, digits),
        "reduction_root": real(&k.reduction_root, digits),
        "bisections": k.bisections.to_string(),
    })
}

pub fn derivative(d: &DerivativeValue, digits: u32) -> Value {
    json!({ "value": real(&d.value, digits), "im_leak": real(&d.im_leak, digits) })
}

pub fn monotonicity(m: &MonotonicityReport, digits: u32) -> Value {
    json!({
        "sigma": real(&m.sigma, digits),
        "direction": format!("{:?}", m.direction),
        "violations": m.violations.to_string(),
        "samples": m.samples.iter().map(|(t, x)| json!([real(t, digits), real(x, digits)])).collect::<Vec<_>>(),
    })
}

/// Segments as an array of polylines of [sigma, t] string pairs.
pub fn segments(polys: &[Polyline], digits: u32) -> Value {
    Value::Array(
        polys
            .iter()
            .map(|p| Value::Array(p.iter().map(|(s, t)| json!([real(s, digits), real(t, digits)])).collect()))
            .collect(),
    )
}

/// Grid CSV with header `sigma,t,log_abs_x,masked`, one row per node in
/// row-major order by t. A node is masked when it is a zero or pole of X;
/// its value is left empty.
pub fn grid_csv(grid: &CurveGrid, digits: u32) -> Result<String, csv::Error> {
    let spec = &grid.spec;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["sigma", "t", "log_abs_x", "masked"])?;
    for j in 0..spec.n_t {
        let t = spec.t(j).to_decimal(digits);
        for i in 0..spec.n_sigma {
            let sigma = spec.sigma(i).to_decimal(digits);
            let (v, m) = match grid.value(i, j) {
                Some(v) => (v.to_decimal(digits), "false"),
                None => (String::new(), "true"),
            };
            w.write_record([sigma.as_str(), t.as_str(), v.as_str(), m])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some(String::new()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(a) => {
            for (k, v) in a.iter().enumerate() {
                flatten(&key(&k.to_string()), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other).unwrap_or_default())),
    }
}

/// `key = value` lines for every leaf of the document.
pub fn to_text(doc: &Value) -> String {
    let mut leaves = Vec::new();
    flatten("", doc, &mut leaves);
    let mut s = String::new();
    for (k, v) in leaves {
        s.push_str(&k);
        s.push_str(" = ");
        s.push_str(&v);
        s.push('\n');
    }
    s
}

/// CSV of a list of objects (one row each, columns from flattened keys of
/// the first row) or of a single object as one row.
pub fn to_csv(rows: &Value) -> Option<String> {
    let items: Vec<&Value> = match rows {
        Value::Array(a) => a.iter().collect(),
        Value::Object(_) => vec![rows],
        _ => return None,
    };
    let flat: Vec<Vec<(String, String)>> = items
        .iter()
        .map(|v| {
            let mut leaves = Vec::new();
            flatten("", v, &mut leaves);
            leaves
        })
        .collect();
    let header: Vec<String> = flat.first().map(|r| r.iter().map(|(k, _)| k.clone()).collect()).unwrap_or_default();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&header).ok()?;
    for row in &flat {
        if row.len() != header.len() || row.iter().zip(&header).any(|((k, _), h)| k != h) {
            return None;
        }
        w.write_record(row.iter().map(|(_, v)| v)).ok()?;
    }
    String::from_utf8(w.into_inner().ok()?).ok()
}
