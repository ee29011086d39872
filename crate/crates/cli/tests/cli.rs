//! End-to-end tests of the `xherm` binary: exact output bytes for the
//! documented examples, exit-code semantics, and determinism of mesh output.

use std::process::{Command, Output};

fn xherm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xherm"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

#[test]
fn odd_series_coefficients_are_exact_json() {
    let out = xherm(&["poly", "--kind", "nu", "--n", "3", "--coeffs"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"1\":\"1\",\"3\":\"2/3\"}\n");
}

#[test]
fn even_series_degree_zero_is_constant_one() {
    let out = xherm(&["poly", "--kind", "mu", "--n", "0", "--coeffs"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"0\":\"1\"}\n");
}

#[test]
fn polynomial_evaluation_prints_real_and_imaginary_parts() {
    let out = xherm(&["poly", "--kind", "hhat", "--n", "4", "--eval", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "28 0\n");
}

#[test]
fn complex_evaluation_accepts_negative_components() {
    let out = xherm(&["poly", "--kind", "nu", "--n", "5", "--eval", "-0.5,0.25"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let parts: Vec<&str> = text.trim().split(' ').collect();
    assert_eq!(parts.len(), 2);
    assert!(parts[0].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn gap_degrees_exit_with_domain_error() {
    let out = xherm(&["poly", "--kind", "xop", "--n", "2", "--coeffs"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("excluded"),
        "stderr should name the exclusion: {err}"
    );
    assert!(
        err.contains("0, 3, 4, 5"),
        "stderr should list admissible degrees: {err}"
    );
}

#[test]
fn missing_output_selector_is_a_usage_error() {
    let out = xherm(&["poly", "--kind", "nu", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unbounded_series_listing_requires_truncation() {
    let out = xherm(&["poly", "--kind", "beta", "--n", "5", "--coeffs"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--trunc"));

    let out = xherm(&[
        "poly", "--kind", "beta", "--n", "5", "--coeffs", "--trunc", "6",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "{\"0\":\"1\",\"1\":\"1\",\"2\":\"-5\",\"4\":\"-25/6\",\"5\":\"-4/5\",\"6\":\"7/6\"}\n"
    );
}

#[test]
fn delta_suite_passes_and_reports_summary() {
    let out = xherm(&["verify", "deltas", "--k-max", "8", "--n-max", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("pass"));
    assert!(text.contains("checks passed"));
}

#[test]
fn gram_suite_accepts_comma_separated_indices() {
    let out = xherm(&["verify", "gram", "--kind", "hhat", "--indices", "0,3,4"]);
    assert!(out.status.success());
}

#[test]
fn gram_suite_rejects_gap_indices() {
    let out = xherm(&["verify", "gram", "--kind", "hhat", "--indices", "0,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_envelope_is_machine_readable() {
    let out = xherm(&["verify", "deltas", "--k-max", "5", "--n-max", "2", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(value["schema"], "xherm/1");
    assert_eq!(value["params"]["k_max"], 5);
    let checks = value["report"]["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn flat_surface_passes_the_curvature_check() {
    let out = xherm(&["verify", "curvature", "--n", "0", "--grid", "9", "9"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn minimal_grid_obj_has_four_vertices_and_one_face() {
    let out = xherm(&["surface", "--n", "0", "--grid", "2", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[..4].iter().all(|l| l.starts_with("v ")));
    assert_eq!(lines[4], "f 1 2 4 3");
}

#[test]
fn csv_header_and_flat_third_component() {
    let out = xherm(&["surface", "--n", "0", "--grid", "3", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,F1,F2,F3,err"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[4], "0", "third coordinate must vanish for n = 0");
    }
}

#[test]
fn json_mesh_envelope_has_schema_and_vertices() {
    let out = xherm(&[
        "surface", "--n", "1", "--grid", "2", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(value["schema"], "xherm/1");
    assert_eq!(value["params"]["n"], 1);
    assert_eq!(value["mesh"]["vertices"].as_array().map(Vec::len), Some(4));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["surface", "--n", "1", "--grid", "4", "4", "--format", "csv"];
    let first = xherm(&args);
    let second = xherm(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["surface", "--n", "1", "--grid", "4", "4", "--format", "csv"];
    let sequential = xherm(&args);
    let threaded = Command::new(env!("CARGO_BIN_EXE_xherm"))
        .args(args)
        .env("XHERM_THREADS", "3")
        .output()
        .expect("binary should launch");
    assert!(threaded.status.success());
    assert_eq!(sequential.stdout, threaded.stdout);
}

#[test]
fn surface_writes_requested_output_file() {
    let dir = std::env::temp_dir().join("xherm-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("patch.obj");
    let out = xherm(&[
        "surface",
        "--n",
        "0",
        "--grid",
        "3",
        "3",
        "--out",
        path.to_str().expect("utf-8 path"),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let contents = std::fs::read_to_string(&path).expect("output file");
    assert_eq!(contents.lines().count(), 9 + 4);
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_domain_is_a_usage_error() {
    let out = xherm(&[
        "surface", "--n", "0", "--grid", "2", "2", "--domain", "1", "-1", "0", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("X0 < X1"));
}

#[test]
fn unknown_format_is_a_usage_error() {
    let out = xherm(&["surface", "--n", "0", "--format", "tiff"]);
    assert_eq!(out.status.code(), Some(2));
}
