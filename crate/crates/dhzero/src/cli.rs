//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dhzero_core::dh::{f_eval, functional_equation_residual, is_trivial_zero, x_eval};
use dhzero_core::kappa_curve::{evaluate_rows, kappa_solve, CurveBox, CurveGrid, GridSpec};
use dhzero_core::zeros::{
    brackets_from_samples, classify_point, eval_record, newton_refine, precision_escalation, sample_z, scan_points,
};
use dhzero_core::{make_context, APComplex, APReal, Error, PrecisionContext};
use serde_json::{json, Map, Value};

use crate::acceptance;
use crate::output::{self, Format};
use crate::parallel::map_ranges;
use crate::table1::{self, PUBLISHED_KAPPA, ROWS};

#[derive(Parser, Debug)]
#[command(name = "dhzero", version, about = "Davenport-Heilbronn function: evaluation, zeros, kappa and |X| = 1 curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Significant decimal digits (at least 30).
    #[arg(long, env = "DHZERO_DIGITS", default_value_t = 60)]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout (a directory for `curve`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for scan, curve and table1. Output does not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// f(s), X(s) and the functional-equation residual at s.
    Eval {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[command(flatten)]
        common: Common,
    },
    /// |f(s)|, |f(1-s)|, their ratio, |X(s)| and the residual.
    Record {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[command(flatten)]
        common: Common,
    },
    /// Refine from s and label the result.
    Classify {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value = PUBLISHED_KAPPA)]
        kappa: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sign changes of Z(t) on the critical line.
    Scan {
        #[arg(allow_hyphen_values = true)]
        t0: String,
        #[arg(allow_hyphen_values = true)]
        t1: String,
        #[arg(long, default_value = "0.1")]
        step: String,
        #[command(flatten)]
        common: Common,
    },
    /// Newton iteration from s.
    Refine {
        #[arg(allow_hyphen_values = true)]
        s: String,
        /// Iterate on Z(t) with sigma pinned to 1/2.
        #[arg(long)]
        on_line: bool,
        #[arg(long, default_value_t = 50)]
        max_iter: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Re-refine from s at several precisions.
    Escalate {
        #[arg(allow_hyphen_values = true)]
        s: String,
        /// Ascending digit counts.
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        digits: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Height where the off-line branch of |X| = 1 meets the critical line.
    Kappa {
        /// Offset from 1/2; defaults to 10^-min(50, (digits - 30) / 2).
        #[arg(long)]
        eps: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// log|X| grid over a box and its |X| = 1 segments.
    Curve {
        /// sigma_min,sigma_max,t_min,t_max
        #[arg(long = "box", allow_hyphen_values = true, default_value = "-6,7,-3,3")]
        bbox: String,
        /// n_sigma,n_t nodes
        #[arg(long, default_value = "261,121")]
        res: String,
        #[command(flatten)]
        common: Common,
    },
    /// The six published table rows recomputed from their coordinates.
    Table1 {
        /// Skip refinement and labelling.
        #[arg(long)]
        no_classify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Criteria to run, default all.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Input(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn object(&self) -> Value {
        match self {
            Failure::Core(e) => output::error_object(output::error_kind(e), &e.to_string()),
            Failure::Input(m) => output::error_object("InputError", m),
            Failure::Io(m) => output::error_object("IoError", m),
        }
    }
}

/// What a command produced: the envelope body plus any alternative
/// renderings it supports.
struct Produced {
    result: Value,
    csv: Option<String>,
    text: Option<String>,
    exit: i32,
}

impl Produced {
    fn json(result: Value) -> Self {
        Self {
            result,
            csv: None,
            text: None,
            exit: 0,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code: 0 success, 1 usage or input error, 2 selftest failure.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    dispatch(cli.command, out, err)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (name, digits, input, format, out_path, workers) = describe(&command);
    let mut doc = output::envelope(name, digits, input);
    let produced = match command {
        Command::Curve { .. } if out_path.is_some() => {
            let dir = out_path.clone().expect("checked");
            execute(command, workers).and_then(|p| write_curve_dir(&dir, &mut doc, p))
        }
        _ => execute(command, workers),
    };
    let (body, exit) = match produced {
        Ok(p) => {
            let alt = match format {
                Format::Json => None,
                Format::Csv => Some(p.csv.clone().or_else(|| output::to_csv(&p.result))),
                Format::Text => Some(p.text.clone()),
            };
            doc.insert("result".into(), p.result);
            let doc = Value::Object(doc);
            match (format, alt) {
                (Format::Json, _) => (pretty(&doc), p.exit),
                (Format::Csv, Some(Some(csv))) => (csv, p.exit),
                (Format::Csv, _) => {
                    let _ = writeln!(err, "error: csv output is not available for {name}");
                    return 1;
                }
                (Format::Text, Some(Some(text))) => (text, p.exit),
                (Format::Text, _) => (output::to_text(&doc), p.exit),
            }
        }
        Err(f) => {
            let obj = f.object();
            let _ = writeln!(err, "error: {}", obj["message"].as_str().unwrap_or_default());
            doc.insert("error".into(), obj);
            let doc = Value::Object(doc);
            let body = match format {
                Format::Text => output::to_text(&doc),
                _ => pretty(&doc),
            };
            (body, 1)
        }
    };
    let write_result = match out_path.filter(|_| name != "curve") {
        Some(path) => fs::write(&path, body.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = write_result {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    exit
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Name, digits, input echo, format, output path and workers of a command.
fn describe(c: &Command) -> (&'static str, Value, Value, Format, Option<PathBuf>, usize) {
    let d = |common: &Common| Value::String(common.digits.to_string());
    let base = |common: &Common| (common.format, common.out.clone(), common.workers);
    match c {
        Command::Eval { s, common } => {
            let (f, o, w) = base(common);
            ("eval", d(common), json!({ "s": s }), f, o, w)
        }
        Command::Record { s, common } => {
            let (f, o, w) = base(common);
            ("record", d(common), json!({ "s": s }), f, o, w)
        }
        Command::Classify { s, kappa, common } => {
            let (f, o, w) = base(common);
            ("classify", d(common), json!({ "s": s, "kappa": kappa }), f, o, w)
        }
        Command::Scan { t0, t1, step, common } => {
            let (f, o, w) = base(common);
            ("scan", d(common), json!({ "t0": t0, "t1": t1, "step": step }), f, o, w)
        }
        Command::Refine {
            s,
            on_line,
            max_iter,
            common,
        } => {
            let (f, o, w) = base(common);
            let input = json!({ "s": s, "on_line": on_line, "max_iter": max_iter.to_string() });
            ("refine", d(common), input, f, o, w)
        }
        Command::Escalate { s, digits, format, out } => {
            let list: Vec<Value> = digits.iter().map(|d| Value::String(d.to_string())).collect();
            ("escalate", Value::Array(list), json!({ "s": s }), *format, out.clone(), 1)
        }
        Command::Kappa { eps, common } => {
            let (f, o, w) = base(common);
            ("kappa", d(common), json!({ "eps": eps }), f, o, w)
        }
        Command::Curve { bbox, res, common } => {
            let (f, o, w) = base(common);
            ("curve", d(common), json!({ "box": bbox, "res": res }), f, o, w)
        }
        Command::Table1 { no_classify, common } => {
            let (f, o, w) = base(common);
            ("table1", d(common), json!({ "classify": !no_classify }), f, o, w)
        }
        Command::Selftest { criteria, format, out } => {
            let list: Vec<Value> = criteria.iter().map(|c| Value::String(c.to_string())).collect();
            ("selftest", Value::Null, json!({ "criteria": list }), *format, out.clone(), 1)
        }
    }
}

fn context(common: &Common) -> Result<PrecisionContext, Failure> {
    Ok(make_context(common.digits)?)
}

fn execute(command: Command, workers: usize) -> Result<Produced, Failure> {
    match command {
        Command::Eval { s, common } => {
            let ctx = context(&common)?;
            let s = ctx.parse_complex(&s)?;
            cmd_eval(&s, &ctx)
        }
        Command::Record { s, common } => {
            let ctx = context(&common)?;
            let s = ctx.parse_complex(&s)?;
            let rec = eval_record(&s, &ctx)?;
            Ok(Produced::json(output::record(&rec, ctx.decimal_digits())))
        }
        Command::Classify { s, kappa, common } => {
            let ctx = context(&common)?;
            let s = ctx.parse_complex(&s)?;
            let kappa = ctx.parse(&kappa)?;
            let c = classify_point(&s, &ctx, &kappa)?;
            Ok(Produced::json(output::classification(&c, ctx.decimal_digits())))
        }
        Command::Scan { t0, t1, step, common } => {
            let ctx = context(&common)?;
            cmd_scan(&ctx.parse(&t0)?, &ctx.parse(&t1)?, &ctx.parse(&step)?, &ctx, workers)
        }
        Command::Refine {
            s,
            on_line,
            max_iter,
            common,
        } => {
            if max_iter == 0 {
                return Err(Failure::Input("--max-iter must be at least 1".into()));
            }
            let ctx = context(&common)?;
            let s = ctx.parse_complex(&s)?;
            let c = newton_refine(&s, &ctx, max_iter, on_line)?;
            Ok(Produced::json(output::candidate(&c, ctx.decimal_digits())))
        }
        Command::Escalate { s, digits, .. } => {
            let top = *digits.iter().max().ok_or_else(|| Failure::Input("empty digits list".into()))?;
            let ctx = make_context(top)?;
            let s = ctx.parse_complex(&s)?;
            let report = precision_escalation(&s, &digits)?;
            Ok(Produced::json(output::escalation(&report)))
        }
        Command::Kappa { eps, common } => {
            let ctx = context(&common)?;
            cmd_kappa(eps.as_deref(), &ctx)
        }
        Command::Curve { bbox, res, common } => {
            let ctx = context(&common)?;
            cmd_curve(&bbox, &res, &ctx, workers)
        }
        Command::Table1 { no_classify, common } => {
            let ctx = context(&common)?;
            cmd_table1(&ctx, !no_classify, workers)
        }
        Command::Selftest { criteria, .. } => cmd_selftest(&criteria),
    }
}

fn cmd_eval(s: &APComplex, ctx: &PrecisionContext) -> Result<Produced, Failure> {
    let digits = ctx.decimal_digits();
    let f = f_eval(s, ctx)?;
    let mut m = Map::new();
    m.insert("s".into(), output::complex(s, digits));
    m.insert("f".into(), output::complex(&f, digits));
    m.insert("f_abs".into(), output::real(&f.abs(), digits));
    match x_eval(s, ctx) {
        Ok(x) => {
            m.insert("x".into(), output::complex(&x, digits));
            m.insert("x_abs".into(), output::real(&x.abs(), digits));
            match functional_equation_residual(s, ctx) {
                Ok(r) => m.insert("residual".into(), output::real(&r, digits)),
                Err(e) => m.insert("residual_error".into(), Failure::Core(e).object()),
            };
        }
        Err(e) => {
            m.insert("x_error".into(), Failure::Core(e).object());
        }
    }
    m.insert("is_trivial_zero".into(), is_trivial_zero(s).into());
    Ok(Produced::json(Value::Object(m)))
}

fn cmd_scan(
    t0: &APReal,
    t1: &APReal,
    step: &APReal,
    ctx: &PrecisionContext,
    workers: usize,
) -> Result<Produced, Failure> {
    let ts = scan_points(t0, t1, step, ctx)?;
    let zs = map_ranges(ts.len(), workers, |r| sample_z(&ts[r], ctx))?;
    let brackets = brackets_from_samples(&ts, &zs);
    let digits = ctx.decimal_digits();
    let list = output::brackets(&brackets, digits);
    let csv = output::to_csv(&list).unwrap_or_else(|| "t_lo,t_hi\n".into());
    Ok(Produced {
        result: json!({ "samples": ts.len().to_string(), "brackets": list }),
        csv: Some(csv),
        text: None,
        exit: 0,
    })
}

/// Default kappa offset 10^-min(50, (digits - 30) / 2), the smallest the
/// precision can resolve.
pub fn default_epsilon_exponent(digits: u32) -> u32 {
    ((digits.saturating_sub(30)) / 2).clamp(1, 50)
}

fn cmd_kappa(eps: Option<&str>, ctx: &PrecisionContext) -> Result<Produced, Failure> {
    let eps = match eps {
        Some(text) => ctx.parse(text)?,
        None => ctx.parse(&format!("1e-{}", default_epsilon_exponent(ctx.decimal_digits())))?,
    };
    let k = kappa_solve(&eps, ctx)?;
    let digits = ctx.decimal_digits();
    let mut v = output::kappa(&k, digits);
    let published = ctx.parse(PUBLISHED_KAPPA)?;
    v["published_kappa"] = PUBLISHED_KAPPA.into();
    v["difference_from_published"] = output::real(&(&k.kappa - &published), 6);
    Ok(Produced::json(v))
}

fn parse_list<const N: usize>(text: &str, what: &str) -> Result<[String; N], Failure> {
    let parts: Vec<String> = text.split(',').map(|p| p.trim().to_string()).collect();
    parts
        .try_into()
        .map_err(|_| Failure::Input(format!("{what} needs {N} comma-separated values, got {text:?}")))
}

fn build_grid(bbox: &str, res: &str, ctx: &PrecisionContext, workers: usize) -> Result<CurveGrid, Failure> {
    let [a, b, c, d] = parse_list::<4>(bbox, "--box")?;
    let bbox = CurveBox::parse(&a, &b, &c, &d)?;
    let [ns, nt] = parse_list::<2>(res, "--res")?;
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Failure::Input(format!("--res entries must be integers, got {s:?}")))
    };
    let spec = GridSpec::new(bbox, count(&ns)?, count(&nt)?, *ctx)?;
    let values = map_ranges(spec.n_t, workers, |rows| evaluate_rows(&spec, rows))?;
    Ok(CurveGrid::assemble(spec, values)?)
}

fn curve_summary(grid: &CurveGrid, digits: u32) -> Value {
    let spec = &grid.spec;
    let masked = grid.masked.iter().filter(|m| **m).count();
    json!({
        "resolution": [spec.n_sigma.to_string(), spec.n_t.to_string()],
        "singular_points": spec.singular_points().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "masked_cells": masked.to_string(),
        "segment_count": grid.segments.len().to_string(),
        "apex": grid.apex(1).map(|a| output::real(&a, digits)).unwrap_or(Value::Null),
    })
}

fn cmd_curve(bbox: &str, res: &str, ctx: &PrecisionContext, workers: usize) -> Result<Produced, Failure> {
    let grid = build_grid(bbox, res, ctx, workers)?;
    let digits = ctx.decimal_digits();
    let mut result = curve_summary(&grid, digits);
    result["segments"] = output::segments(&grid.segments, digits);
    let csv = output::grid_csv(&grid, digits).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(Produced {
        result,
        csv: Some(csv),
        text: None,
        exit: 0,
    })
}

/// Writes grid.csv, segments.json and curve.json under `dir`; the result
/// keeps the summary and names the files.
fn write_curve_dir(dir: &Path, doc: &mut Map<String, Value>, mut p: Produced) -> Result<Produced, Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let segments = p.result.as_object_mut().and_then(|m| m.remove("segments")).unwrap_or(Value::Null);
    let csv = p.csv.take().unwrap_or_default();
    fs::write(dir.join("grid.csv"), csv).map_err(io)?;
    fs::write(dir.join("segments.json"), pretty(&segments)).map_err(io)?;
    p.result["files"] = json!(["grid.csv", "segments.json", "curve.json"]);
    let mut full = doc.clone();
    full.insert("result".into(), p.result.clone());
    fs::write(dir.join("curve.json"), pretty(&Value::Object(full))).map_err(io)?;
    Ok(p)
}

fn cmd_table1(ctx: &PrecisionContext, classify: bool, workers: usize) -> Result<Produced, Failure> {
    let kappa = ctx.parse(PUBLISHED_KAPPA)?;
    let rows = map_ranges(ROWS.len(), workers, |r| {
        ROWS[r]
            .iter()
            .map(|row| table1::compute_row(row, ctx, &kappa, classify))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let digits = ctx.decimal_digits();
    let list: Vec<Value> = rows.iter().map(|r| table1::row_json(r, digits)).collect();
    let csv_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let short = 10;
            json!({
                "name": r.published.name,
                "s": r.published.s,
                "f_abs": output::real(&r.record.f_abs, short),
                "f1s_abs": output::real(&r.record.f1s_abs, short),
                "ratio": r.record.ratio.as_ref().map(|v| output::real(v, short)).unwrap_or(Value::Null),
                "x_abs": output::real(&r.record.x_abs, short),
                "residual": output::real(&r.record.residual, short),
                "published_x_abs": r.published.x_abs,
                "x_abs_agrees": table1::agrees(&r.record.x_abs, r.published.x_abs, table1::AGREEMENT_TOL),
                "classification": r.label,
                "published_classification": r.published.label,
                "score": output::real(&r.score, short),
            })
        })
        .collect();
    Ok(Produced {
        result: json!({
            "kappa": PUBLISHED_KAPPA,
            "agreement_tolerance": table1::AGREEMENT_TOL.to_string(),
            "rows": list,
        }),
        csv: output::to_csv(&Value::Array(csv_rows)),
        text: None,
        exit: 0,
    })
}

fn cmd_selftest(criteria: &[usize]) -> Result<Produced, Failure> {
    let count = acceptance::NAMES.len();
    if let Some(bad) = criteria.iter().find(|&&c| c == 0 || c > count) {
        return Err(Failure::Input(format!("criteria are numbered 1 to {count}, got {bad}")));
    }
    let ids: Vec<usize> = if criteria.is_empty() {
        (1..=count).collect()
    } else {
        criteria.to_vec()
    };
    let mut outcomes = Vec::new();
    let mut text = String::new();
    for id in ids {
        let o = acceptance::run(id);
        text.push_str(&o.line());
        text.push('\n');
        outcomes.push(o);
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let list: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "id": o.id.to_string(), "name": o.name(), "passed": o.passed, "detail": o.detail }))
        .collect();
    Ok(Produced {
        result: json!({ "passed": passed, "criteria": list }),
        csv: None,
        text: Some(text),
        exit: if passed { 0 } else { 2 },
    })
}
