//! Exit-code contract, JSON round-trips, and output determinism of the
//! command-line interface.

use std::io::Write as _;
use std::process::{Command, Output};

use korenblum::bounds::ClaimReport;
use korenblum::certification::{Certificate, SearchResult};
use korenblum::oracle::PairReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_korenblum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn json_result(output: &Output) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).expect("valid JSON");
    assert_eq!(v["schema"], "korenblum-certifier/1");
    v["result"].clone()
}

#[test]
fn certify_exit_codes() {
    assert_eq!(code(&run(&["certify", "bergman", "--c", "0.21"])), 0);
    assert_eq!(code(&run(&["certify", "fock", "--c", "0.54"])), 0);
    assert_eq!(code(&run(&["certify", "fock", "--c", "0.60"])), 1);
    assert_eq!(code(&run(&["certify", "bergman", "--c", "0.71"])), 2);
    assert_eq!(code(&run(&["certify", "bergman", "--c", "1.5"])), 2);
}

#[test]
fn certificate_json_round_trips() {
    let out = run(&["certify", "fock", "--c", "0.54", "--format", "json"]);
    let result = json_result(&out);
    let cert: Certificate = serde_json::from_value(result.clone()).expect("deserializes");
    assert_eq!(serde_json::to_value(&cert).unwrap(), result);
    assert!(cert.pass);
}

#[test]
fn search_exit_codes_and_round_trip() {
    let out = run(&["search", "fock", "--lo", "0.1", "--hi", "0.9", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let result = json_result(&out);
    let sr: SearchResult = serde_json::from_value(result.clone()).expect("deserializes");
    assert_eq!(serde_json::to_value(&sr).unwrap(), result);
    assert!(sr.c_max >= 0.54 && sr.c_max <= 0.60);
    // invalid bracket
    assert_eq!(code(&run(&["search", "bergman", "--lo", "0.6", "--hi", "0.7"])), 2);
}

#[test]
fn eval_commands() {
    let out = run(&["eval", "cstar", "--c", "0.21", "--a", "0.5", "--z", "-0.5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("truncation bound"));

    // coincident points evaluate to zero
    let out = run(&["eval", "cstar", "--c", "0.21", "--a", "0.5", "--z", "0.5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_result(&out)["value"], 0.0);

    // boundary-layer note for F >= 1
    let out = run(&["eval", "f-bound", "--c", "0.21", "--rho", "0.999"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("boundary layer"));

    // domain error
    assert_eq!(code(&run(&["eval", "f-bound", "--c", "0.21", "--rho", "0.1"])), 2);
    // malformed complex literal
    assert_eq!(code(&run(&["eval", "cstar", "--c", "0.21", "--a", "0.5", "--z", "nope"])), 2);
}

#[test]
fn scan_commands() {
    let out = run(&["scan", "criterion", "--space", "bergman", "--lo", "0.05", "--hi", "0.30", "--step", "0.01", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c,criterion,pass");
    assert_eq!(lines.len(), 1 + 26, "header plus 26 rows");

    let out = run(&["scan", "f-bound", "--c", "0.21", "--steps", "200", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert_eq!(text.lines().count(), 1 + 200);

    // empty/malformed range
    assert_eq!(code(&run(&["scan", "f-bound", "--c", "0.21", "--steps", "0"])), 2);
    assert_eq!(code(&run(&["scan", "criterion", "--lo", "0.3", "--hi", "0.1"])), 2);
}

#[test]
fn verify_commands() {
    let out = run(&["verify", "fn-bound", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let reports: Vec<ClaimReport> = serde_json::from_value(json_result(&out)).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].pass);

    // the closed-form chain genuinely holds at c = 0.3; it breaks at 0.6
    assert_eq!(code(&run(&["verify", "fg-product", "--c", "0.3"])), 0);
    assert_eq!(code(&run(&["verify", "fg-product", "--c", "0.6"])), 1);
    assert_eq!(code(&run(&["verify", "no-such-claim"])), 2);

    let out = run(&["verify", "tedious", "--theta-steps", "4"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("low-density"));
}

#[test]
fn check_pair_exit_codes_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();

    let write_pair = |name: &str, f: &str, g: &str| {
        let path = dir.path().join(name);
        let mut file = std::fs::File::create(&path).unwrap();
        write!(file, r#"{{"f": {f}, "g": {g}}}"#).unwrap();
        path
    };
    let z = r#"{"min_degree": 1, "coeffs": [[1.0, 0.0]]}"#;

    let counterexample = write_pair("ce.json", r#"{"min_degree": 0, "coeffs": [[0.71, 0.0]]}"#, z);
    let out = run(&["check-pair", counterexample.to_str().unwrap(), "--space", "bergman", "--c", "0.71", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let report: PairReport = serde_json::from_value(json_result(&out)).unwrap();
    assert!((report.norm_f_sq - 0.5041).abs() < 1e-12);
    assert!((report.norm_g_sq - 0.5).abs() < 1e-15);
    assert!(!report.conclusion_holds);

    let dominated = write_pair("ok.json", r#"{"min_degree": 0, "coeffs": [[0.21, 0.0]]}"#, z);
    assert_eq!(code(&run(&["check-pair", dominated.to_str().unwrap(), "--space", "bergman", "--c", "0.21"])), 0);

    let broken = write_pair("bad.json", r#"{"min_degree": 0, "coeffs": [[1.5, 0.0]]}"#, z);
    assert_eq!(code(&run(&["check-pair", broken.to_str().unwrap(), "--space", "bergman", "--c", "0.5"])), 3);

    assert_eq!(code(&run(&["check-pair", "/no/such/file.json", "--space", "bergman", "--c", "0.5"])), 2);

    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, "not json").unwrap();
    assert_eq!(code(&run(&["check-pair", invalid.to_str().unwrap(), "--space", "bergman", "--c", "0.5"])), 2);
}

#[test]
fn machine_output_is_byte_identical() {
    for args in [
        vec!["certify", "bergman", "--c", "0.21", "--format", "json"],
        vec!["search", "fock", "--lo", "0.1", "--hi", "0.9", "--format", "json"],
        vec!["scan", "f-bound", "--c", "0.21", "--steps", "50", "--format", "csv"],
        vec!["eval", "lower-bound", "--c", "0.21", "--a", "0.5", "--z", "-0.5", "--degree", "1", "--restarts", "2", "--seed", "7", "--format", "json"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "output differs for {args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = run(&["certify", "fock", "--c", "0.54", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["pass"], true);
}

#[test]
fn claim_report_json_round_trips_through_library_runner() {
    // exercised through run_with_writer to keep the in-process path tested
    let mut buf = Vec::new();
    let args: Vec<String> = ["verify", "tail-bound", "--format", "json"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let exit = korenblum::cli::run_with_writer(&args, &mut buf);
    assert_eq!(exit, 0);
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    let reports: Vec<ClaimReport> = serde_json::from_value(v["result"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&reports).unwrap(), v["result"]);
}
