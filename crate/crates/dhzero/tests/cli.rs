use std::process::Command;

use dhzero::cli;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["dhzero"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run(args);
    (code, serde_json::from_str(&out).expect("json output"))
}

fn no_native_numbers(v: &Value) -> bool {
    match v {
        Value::Number(_) => false,
        Value::Array(a) => a.iter().all(no_native_numbers),
        Value::Object(m) => m.values().all(no_native_numbers),
        _ => true,
    }
}

#[test]
fn envelope_fields_and_string_numbers() {
    let (code, doc) = json(&["eval", "0.3+2i", "--digits", "30"]);
    assert_eq!(code, 0);
    assert_eq!(doc["tool"], "dhzero");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["command"], "eval");
    assert_eq!(doc["digits"], "30");
    assert_eq!(doc["input"]["s"], "0.3+2i");
    assert!(no_native_numbers(&doc));
    let residual: f64 = doc["result"]["residual"].as_str().unwrap().parse().unwrap();
    assert!(residual < 1e-25);
}

#[test]
fn malformed_point_is_an_error_object() {
    let (code, doc) = json(&["eval", "1e--5"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "ParseError");
    assert_eq!(doc["input"]["s"], "1e--5");
}

#[test]
fn low_precision_rejected() {
    let (code, doc) = json(&["record", "0.3+2i", "--digits", "10"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "PrecisionTooLow");
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = run(&["eval"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"));
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn trivial_zero_and_pole() {
    let (code, doc) = json(&["eval", "-3", "--digits", "30"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["f_abs"], "0");
    assert_eq!(doc["result"]["is_trivial_zero"], true);
    let (code, doc) = json(&["eval", "2", "--digits", "30"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["x_error"]["kind"], "PoleOfX");
    let (code, doc) = json(&["record", "2", "--digits", "30"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "PoleOfX");
}

#[test]
fn scan_output_independent_of_workers() {
    let base = ["scan", "14", "15", "--step", "0.1", "--digits", "30"];
    let outputs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            let mut args = base.to_vec();
            args.extend(["--workers", w]);
            let (code, out, _) = run(&args);
            assert_eq!(code, 0);
            out
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let doc: Value = serde_json::from_str(&outputs[0]).unwrap();
    assert_eq!(doc["result"]["brackets"].as_array().unwrap().len(), 1);
    assert_eq!(doc["result"]["brackets"][0]["t_lo"], "14.4");
}

#[test]
fn empty_scan_range() {
    let (code, doc) = json(&["scan", "5", "5", "--digits", "30"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["brackets"].as_array().unwrap().len(), 0);
}

#[test]
fn curve_csv_independent_of_workers() {
    let base = ["curve", "--box", "-1.5,2.5,-2,2", "--res", "9,11", "--digits", "30", "--format", "csv"];
    let outputs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            let mut args = base.to_vec();
            args.extend(["--workers", w]);
            let (code, out, err) = run(&args);
            assert_eq!(code, 0, "{err}");
            out
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let mut lines = outputs[0].lines();
    assert_eq!(lines.next(), Some("sigma,t,log_abs_x,masked"));
    assert_eq!(lines.count(), 99);
    // s = -1 and s = 2 fall on nodes and are masked
    assert!(outputs[0].contains("\n-1,0,,true\n"));
    assert!(outputs[0].contains("\n2,0,,true\n"));
}

#[test]
fn curve_out_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("fig");
    let target_str = target.to_str().unwrap();
    let (code, doc) = json(&["curve", "--box", "0.3,0.7,0,2", "--res", "9,21", "--digits", "30", "--out", target_str]);
    assert_eq!(code, 0);
    assert!(doc["result"].get("segments").is_none());
    let csv = std::fs::read_to_string(target.join("grid.csv")).unwrap();
    assert!(csv.starts_with("sigma,t,log_abs_x,masked\n"));
    let segs: Value = serde_json::from_str(&std::fs::read_to_string(target.join("segments.json")).unwrap()).unwrap();
    assert!(!segs.as_array().unwrap().is_empty());
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(target.join("curve.json")).unwrap()).unwrap();
    assert_eq!(meta["input"]["box"], "0.3,0.7,0,2");
    assert_eq!(meta["digits"], "30");
}

#[test]
fn bad_box_is_input_error() {
    let (code, doc) = json(&["curve", "--box", "1,2,3", "--digits", "30"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "InputError");
    let (code, doc) = json(&["curve", "--box", "1,0,0,1", "--digits", "30"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "DomainError");
}

#[test]
fn kappa_default_epsilon() {
    let (code, doc) = json(&["kappa", "--digits", "40"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["epsilon"], "0.00001");
    let k: f64 = doc["result"]["kappa"].as_str().unwrap().parse().unwrap();
    assert!((k - 1.21164).abs() < 1e-5);
    let (code, doc) = json(&["kappa", "--eps", "0", "--digits", "40"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "DomainError");
}

#[test]
fn refine_on_line() {
    let (code, doc) = json(&["refine", "0.5+14.4i", "--on-line", "--digits", "40"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["converged"], true);
    assert_eq!(doc["result"]["constrained"], true);
    let t: f64 = doc["result"]["refined"]["im"].as_str().unwrap().parse().unwrap();
    assert!((t - 14.404003).abs() < 1e-5);
}

#[test]
fn classify_far_point() {
    let (code, doc) = json(&["classify", "3", "--digits", "30"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["label"], "NotZero");
    assert_eq!(doc["input"]["kappa"], "1.21164");
}

#[test]
fn escalate_digit_list() {
    let (code, doc) = json(&["escalate", "3", "--digits", "30,40"]);
    assert_eq!(code, 0);
    assert_eq!(doc["digits"], serde_json::json!(["30", "40"]));
    assert_eq!(doc["result"]["entries"].as_array().unwrap().len(), 2);
    let (code, _) = json(&["escalate", "3", "--digits", "40,30"]);
    assert_eq!(code, 1);
}

#[test]
fn table1_rows_without_classification() {
    let (code, doc) = json(&["table1", "--no-classify", "--digits", "30"]);
    assert_eq!(code, 0);
    let rows = doc["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[1]["agrees"]["x_abs"], true);
    assert_eq!(rows[4]["computed"]["x_abs"], "1");
    let (code, out, _) = run(&["table1", "--no-classify", "--digits", "30", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn text_and_csv_formats() {
    let (code, out, _) = run(&["record", "0.5+3i", "--digits", "30", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("result.x_abs = 1\n"));
    let (code, out, _) = run(&["record", "0.5+3i", "--digits", "30", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("s.re,s.im,f_abs,f1s_abs,ratio,x_abs,residual,digits\n"));
    let (code, out, _) = run(&["refine", "3", "--digits", "30", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("start.re,start.im,refined.re,"));
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn selftest_exit_codes() {
    let (code, out, _) = run(&["selftest", "--criteria", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("criterion 4 PASS"));
    let (code, _, err) = run(&["selftest", "--criteria", "10"]);
    assert_eq!(code, 1);
    assert!(err.contains("1 to 9"));
}

#[test]
fn out_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let (code, out, _) = run(&["record", "0.7+3i", "--digits", "35", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn binary_reads_digits_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dhzero"))
        .args(["eval", "0.5"])
        .env("DHZERO_DIGITS", "35")
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["digits"], "35");

    let out = Command::new(env!("CARGO_BIN_EXE_dhzero"))
        .args(["eval", "nonsense"])
        .env_remove("DHZERO_DIGITS")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
