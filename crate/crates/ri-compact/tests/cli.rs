//! End-to-end tests of the command-line binary: schemas, exit codes, and
//! output formats.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ri-compact"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_yes_query() {
    let out = run(&[
        "classify",
        "--json",
        r#"{"schema":"ri-compact/1","domain":{"kind":"product","phi":{"family":"gauss"},"n":3},"m":1,"X":{"family":"lebesgue","p":2},"Y":{"family":"lebesgue","p":2}}"#,
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["compact"], "yes");
    assert_eq!(v["schema"], "ri-compact/1");
    assert!(v["rule"].as_str().unwrap().len() > 3);
}

#[test]
fn classify_out_of_scope_exits_3() {
    let out = run(&[
        "classify",
        "--json",
        r#"{"domain":{"kind":"mazya_class","alpha":0.9,"n":2},"m":1,"X":{"family":"lorentz_zygmund","p":1,"q":1,"alpha":0.5},"Y":{"family":"lebesgue","p":2}}"#,
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["compact"], "out_of_scope");
}

#[test]
fn malformed_json_exits_2_with_no_output() {
    let out = run(&["classify", "--json", "{not json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "partial output produced");
}

#[test]
fn wrong_schema_version_exits_2() {
    let out = run(&[
        "classify",
        "--json",
        r#"{"schema":"ri-compact/99","domain":{"kind":"john","n":2},"m":1,"X":{"family":"lebesgue","p":2},"Y":{"family":"lebesgue","p":2}}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_field_exits_2() {
    let out = run(&[
        "classify",
        "--json",
        r#"{"domain":{"kind":"john","n":2},"m":1,"X":{"family":"lebesgue","p":2}}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Y"), "error does not name the field: {err}");
}

const PROBE_REQ: &str = r#"{"schema":"ri-compact/1","op":{"kind":"H","j":1,"profile":{"family":"one"}},"X":{"family":"lebesgue","p":1},"Y":{"family":"lebesgue","p":"inf"},"config":{"a_points":5,"min_a":0.01}}"#;

#[test]
fn probe_csv_has_contract_columns_and_constant_curve() {
    let out = run(&["probe", "--json", PROBE_REQ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a,lower_bound,estimate,citation");
    let rows: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let lb: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((lb - 1.0).abs() < 1e-9, "expected constant curve, got {row}");
    }
}

#[test]
fn probe_json_reports_bounded_below_hint() {
    let out = run(&["probe", "--format", "json", "--json", PROBE_REQ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["hint"], "bounded_below");
    assert_eq!(v["schema"], "ri-compact/1");
    assert!(v["points"].as_array().unwrap().len() == 5);
}

#[test]
fn probe_is_deterministic_for_a_fixed_seed() {
    let a = run(&["probe", "--seed", "7", "--json", PROBE_REQ]);
    let b = run(&["probe", "--seed", "7", "--json", PROBE_REQ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn norm_command_matches_closed_form() {
    let out = run(&[
        "norm",
        "--json",
        r#"{"space":{"family":"lebesgue","p":2},"f":{"breakpoints":[0.0,0.25,1.0],"values":[1.0,0.0]}}"#,
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn apply_command_returns_step_function() {
    let out = run(&[
        "apply",
        "--json",
        r#"{"op":{"kind":"H","j":1,"profile":{"family":"one"}},"f":{"breakpoints":[0.0,0.5,1.0],"values":[1.0,0.0]},"grid":16}"#,
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    let bp = v["f"]["breakpoints"].as_array().unwrap();
    let vals = v["f"]["values"].as_array().unwrap();
    assert_eq!(bp.len(), vals.len() + 1);
    // H1 of the half indicator is 1/2 at 0 and 0 at 1
    assert!(vals[0].as_f64().unwrap() > 0.49);
    assert!(vals.last().unwrap().as_f64().unwrap() < 1e-12);
}

#[test]
fn domain_command_prints_profile_table() {
    let out = run(&[
        "domain",
        "--json",
        r#"{"domain":{"kind":"product","phi":{"family":"gauss"},"n":2},"points":8}"#,
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert!(v["profile"].as_array().unwrap().len() >= 7);
    assert_eq!(v["regime"], "zero_limit");
    assert!(v["c_phi"].as_f64().is_some());
}

#[test]
fn invalid_domain_exits_2() {
    let out = run(&[
        "domain",
        "--json",
        r#"{"domain":{"kind":"mazya_class","alpha":0.1,"n":2}}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_all_passes() {
    let out = run(&["selftest", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn unknown_selftest_suite_exits_2() {
    let out = run(&["selftest", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_flag_writes_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = bin()
        .args(["probe", "--json", PROBE_REQ, "-o"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("a,lower_bound,estimate,citation"));
}

#[test]
fn input_file_flag_reads_the_request() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(
        &path,
        r#"{"domain":{"kind":"john","n":2},"m":1,"X":{"family":"lebesgue","p":3},"Y":{"family":"lebesgue","p":"inf"}}"#,
    )
    .unwrap();
    let out = bin().arg("classify").arg("-i").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(stdout_json(&out)["compact"], "yes");
}

#[test]
fn grid_env_var_controls_default_resolution() {
    let out = bin()
        .args([
            "apply",
            "--json",
            r#"{"op":{"kind":"H","j":1,"profile":{"family":"one"}},"f":{"breakpoints":[0.0,0.5,1.0],"values":[1.0,0.0]}}"#,
        ])
        .env("RI_COMPACT_GRID", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["f"]["values"].as_array().unwrap().len(), 8);
}
