use std::io::Write as _;
use std::process::Command;

use charsum::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["charsum"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = call(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn eval_examples() {
    let v = json(&["eval", "--family", "f3", "--a", "1", "--p", "13"]);
    assert_eq!((v["value"].as_i64(), v["method"].as_str()), (Some(-2), Some("cubic_cm")));
    let v = json(&["eval", "--family", "g1", "--a", "1", "--p", "5", "--method", "oracle"]);
    assert_eq!((v["value"].as_i64(), v["method"].as_str()), (Some(-3), Some("oracle")));
    let (code, out, _) = call(&["eval", "--family", "legendre", "--beta", "2", "--p", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("S = 0") && out.contains("supersingular"), "{out}");
}

#[test]
fn eval_family_by_letter_and_n() {
    let v = json(&["eval", "--family", "f", "--n", "3", "--a", "1", "--p", "13"]);
    assert_eq!(v["value"].as_i64(), Some(-2));
}

#[test]
fn eval_shows_decomposition() {
    let (_, out, _) = call(&["eval", "--family", "g19", "--a", "1", "--p", "47"]);
    assert!(out.contains("method:") && out.contains("u = "), "{out}");
}

#[test]
fn eval_coefficients() {
    // x^4 + 1 over F_5
    let v = json(&["eval", "--coeffs", "1,0,0,0,1", "--p", "5"]);
    assert_eq!(v["value"].as_i64(), Some(-3));
    let (code, _, err) = call(&["eval", "--coeffs", "1,2,3,4,5,6,7", "--p", "11", "--method", "closed"]);
    assert_eq!(code, 2);
    assert!(err.contains("not applicable"), "{err}");
}

#[test]
fn count_examples() {
    let v = json(&["count", "--family", "g3", "--a", "1", "--p", "7"]);
    assert_eq!((v["affine"].as_i64(), v["with_infinity"].as_i64()), (Some(14), Some(15)));
    let v = json(&["count", "--family", "f1", "--a", "1", "--p", "5"]);
    assert_eq!((v["affine"].as_i64(), v["with_infinity"].as_i64()), (Some(3), Some(4)));
    let v = json(&["count", "--family", "f1", "--a", "1", "--p", "7"]);
    assert_eq!((v["affine"].as_i64(), v["with_infinity"].as_i64()), (Some(7), Some(8)));
}

#[test]
fn input_errors_exit_two_with_reason() {
    let (code, _, err) = call(&["eval", "--family", "f7", "--a", "1", "--p", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("bad reduction"), "{err}");
    let (code, _, err) = call(&["eval", "--family", "f3", "--p", "15"]);
    assert_eq!(code, 2);
    assert!(err.contains("not an odd prime"), "{err}");
    let (code, _, err) = call(&["eval", "--family", "f5", "--p", "13"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown family"), "{err}");
    assert_eq!(call(&["eval", "--p", "13"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["verify", "--pmax", "2"]).0, 2);
    assert_eq!(call(&["verify", "--pmax", "20000"]).0, 2);
    assert_eq!(call(&["eval", "--family", "f3", "--p", "13", "--jobs", "0"]).0, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn verify_tiny_range_is_empty_and_passes() {
    let (code, out, err) = call(&["verify", "--suite", "all", "--pmax", "3"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 12);
}

#[test]
fn verify_cm_cubic_and_factor_counts() {
    let (code, out, _) = call(&["verify", "--suite", "cm-cubic", "--suite", "hasse-factors", "--pmax", "300"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS cm-cubic") && out.contains("PASS hasse-factors"));
}

#[test]
fn verify_report_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for jobs in ["1", "4"] {
        let path = dir.path().join(format!("r{jobs}.json"));
        let path_s = path.to_str().unwrap();
        let (code, _, _) =
            call(&["verify", "--suite", "split-quartic", "--suite", "quadratic", "--pmax", "150", "--jobs", jobs, "--out", path_s]);
        assert_eq!(code, 0);
        bodies.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let v: Value = serde_json::from_slice(&bodies[0]).unwrap();
    assert!(v["quadratic"]["cases"].as_array().unwrap().len() > 1000);
    assert_eq!(v["quadratic"]["cases"][0]["match"], Value::Bool(true));
}

#[test]
fn verify_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cm.csv");
    let (code, _, _) = call(&["verify", "--suite", "cm-cubic", "--pmax", "50", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("family,p,params,closed,oracle,match,u_chosen,method,residue_only"));
}

#[test]
fn pinned_conventions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.json");
    let path_s = path.to_str().unwrap();
    let (code, out, _) = call(&["verify", "--pin-conventions", "--pmax", "300", "--conventions-out", path_s]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("pinned")).count(), 9);
    let v = json(&["eval", "--family", "f11", "--a", "2", "--p", "89", "--conventions", path_s]);
    let o = json(&["eval", "--family", "f11", "--a", "2", "--p", "89", "--method", "oracle"]);
    assert_eq!(v["value"], o["value"]);
}

#[test]
fn broken_conventions_file_is_an_input_error() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "{{\"f1\": 3}}").unwrap();
    let (code, _, _) = call(&["eval", "--family", "f1", "--p", "13", "--conventions", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn config_file_fills_missing_flags() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "family = f3\na = 1\np = 13\nformat = json").unwrap();
    let cfg = f.path().to_str().unwrap();
    let (code, out, _) = call(&["eval", "--config", cfg]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["value"].as_i64(), Some(-2));
    // flags win over the file
    let (_, out, _) = call(&["eval", "--config", cfg, "--p", "7"]);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["p"].as_u64(), Some(7));
}

#[test]
fn hasse_outputs() {
    let (code, out, _) = call(&["hasse", "--p", "7", "--beta", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["supersingular"], Value::Bool(true));
    let (_, out, _) = call(&["hasse", "--pmax", "30", "--format", "csv"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "p,h,n1,n2,n2_all,consistent,squarefree");
    assert!(rows[1..].iter().all(|r| r.contains(",true,true")), "{out}");
    let (_, out, _) = call(&["hasse", "--pmax", "30", "--format", "json"]);
    assert!(out.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
}

#[test]
fn bench_needs_a_family() {
    assert_eq!(call(&["bench"]).0, 2);
}

#[test]
fn bench_cm_family_is_far_faster() {
    let (code, out, err) = call(&["bench", "--family", "f1", "--pbits", "24", "--budget-ms", "100"]);
    assert_eq!(code, 0, "{err}");
    let last = out.lines().last().unwrap();
    let cols: Vec<&str> = last.split(',').collect();
    assert!(cols[1].parse::<u64>().unwrap() > 1 << 24);
    assert!(cols[5].parse::<f64>().unwrap() > 1e3, "{out}");
}

#[test]
fn bench_legendre_runs() {
    let (code, out, _) = call(&["bench", "--family", "legendre", "--beta", "2", "--pbits", "14", "--budget-ms", "500"]);
    assert_eq!(code, 0);
    let last = out.lines().last().unwrap();
    assert!(last.contains("legendre_hasse"), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_charsum");
    let ok = Command::new(bin).args(["eval", "--family", "f3", "--a", "1", "--p", "13"]).env("CHARSUM_LOG", "debug").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["eval", "--family", "f7", "--p", "7"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
