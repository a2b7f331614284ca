//! End-to-end checks of the command-line interface: exit statuses, file
//! round trips, and text/structured verdict agreement.

use std::path::PathBuf;
use std::process::{Command, Output};

fn tightoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tightoa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("tightoa-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn rao_prints_bound() {
    let out = tightoa(&["rao", "--n", "5", "--q", "2", "--e", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict : 16"));
    let out = tightoa(&["rao", "--n", "11", "--q", "3", "--e", "2"]);
    assert!(stdout(&out).contains("243"));
}

#[test]
fn usage_errors_exit_2() {
    let out = tightoa(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tightoa(&["rao", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_1() {
    let out = tightoa(&["verify", "--in", "/nonexistent/file.oa"]);
    assert_eq!(out.status.code(), Some(1));
    let out = tightoa(&["krein", "--array", "not-an-array"]);
    assert_eq!(out.status.code(), Some(1));
    // Underivable array: irrational dual eigenvalues (the 4-class array
    // for (n, q) = (4, 2) has discriminant 12).
    let out = tightoa(&["krein", "--array", "3,2,2,1;1,2,2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn design_verify_round_trip() {
    let path = tmp_path("golay.oa");
    let out = tightoa(&[
        "design",
        "--name",
        "golay-dual-11-3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let out = tightoa(&["verify", "--in", path.to_str().unwrap(), "--strength", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("strength 4 confirmed"));

    // Emitting the parsed set again reproduces the identical file.
    let text = std::fs::read_to_string(&path).unwrap();
    let reparsed = tightoa(&["verify", "--in", path.to_str().unwrap()]);
    assert!(stdout(&reparsed).contains("strength 4"));
    let ps = tightoa::cli::parse_oa_text(&text, "round-trip").unwrap();
    assert_eq!(tightoa::cli::format_oa(&ps), text);
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_unconfirmed_strength_still_exits_0() {
    let path = tmp_path("rep.oa");
    tightoa(&["design", "--name", "repetition-dual-5-2", "--out", path.to_str().unwrap()]);
    let out = tightoa(&["verify", "--in", path.to_str().unwrap(), "--strength", "5"]);
    assert!(out.status.success(), "completed analysis must exit 0");
    assert!(stdout(&out).contains("NOT confirmed"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn derive_scheme_and_fiber_pipeline() {
    let path = tmp_path("rep2.oa");
    tightoa(&["design", "--name", "repetition-dual-5-2", "--out", path.to_str().unwrap()]);
    let out = tightoa(&["derive-scheme", "--in", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("4,3,2,1;1,2,3,4"), "{text}");

    let out = tightoa(&["fiber", "--in", path.to_str().unwrap(), "--index", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("strength 3"), "{text}");

    let out = tightoa(&[
        "triples-count",
        "--in",
        path.to_str().unwrap(),
        "--u",
        "0",
        "--v",
        "1",
        "--w",
        "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("identities_verified"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn scan_noda_reports_only_r9_feasible() {
    let out = tightoa(&["scan-noda", "--r", "5:13:2", "--jobs", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("feasible at r = 9"), "{text}");
}

#[test]
fn triple_infeasibility_is_a_completed_analysis() {
    let out = tightoa(&[
        "triple",
        "--array",
        "21,16,10,1;1,2,16,21",
        "--u",
        "1",
        "--v",
        "1",
        "--w",
        "1",
    ]);
    assert!(out.status.success(), "mathematical infeasibility exits 0");
    let text = stdout(&out);
    assert!(text.contains("no-integral-point"), "{text}");
}

#[test]
fn structured_and_text_verdicts_agree() {
    let args = ["krein", "--array", "77,72,10,1;1,2,72,77"];
    let text_out = stdout(&tightoa(&args));
    let mut structured_args = args.to_vec();
    structured_args.extend(["--format", "structured"]);
    let json_out = stdout(&tightoa(&structured_args));
    let doc: serde_json::Value = serde_json::from_str(&json_out).expect("valid JSON");
    let verdict = doc["verdict"].as_str().unwrap();
    assert!(text_out.contains(&format!("verdict : {verdict}")));
    assert_eq!(verdict, "feasible");
    assert_eq!(doc["details"]["vertex_count"], serde_json::json!(3240));
    assert_eq!(doc["command"], serde_json::json!("krein"));
    assert!(doc["elapsed_ms"].is_number());
}

#[test]
fn noda_filter_and_wilson_zeros() {
    let out = stdout(&tightoa(&["noda-filter", "--a", "3", "--format", "structured"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["details"]["mod5"], serde_json::json!(false));
    assert_eq!(doc["details"]["mod3"], serde_json::json!(true));

    let out = stdout(&tightoa(&["wilson-zeros", "--n", "11", "--q", "3", "--e", "2", "--format", "structured"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["details"]["zeros"], serde_json::json!([6, 9]));
    assert_eq!(doc["details"]["exact"], serde_json::json!(true));
}
