//! End-to-end tests against the compiled binary: exit codes, output
//! formats, and determinism.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const ZADEH_DOC: &str = r#"{
  "frame": ["A", "B", "C"],
  "sources": [
    {"name": "expert1", "masses": [{"set": ["A"], "mass": 0.99}, {"set": ["C"], "mass": 0.01}]},
    {"name": "expert2", "masses": [{"set": ["B"], "mass": 0.99}, {"set": ["C"], "mass": 0.01}]}
  ]
}"#;

const TOTAL_CONFLICT_DOC: &str = r#"{
  "frame": ["A", "B"],
  "sources": [
    {"name": "s1", "masses": [{"set": ["A"], "mass": 1.0}]},
    {"name": "s2", "masses": [{"set": ["B"], "mass": 1.0}]}
  ]
}"#;

fn write_doc(dir: &TempDir, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut file = std::fs::File::create(&path).unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    path
}

fn evcomb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evcomb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn combine(input: &Path, rule: &str, format: &str) -> Output {
    evcomb(&[
        "combine",
        "--input",
        input.to_str().unwrap(),
        "--rule",
        rule,
        "--format",
        format,
    ])
}

#[test]
fn combine_pcr5_json_reports_the_golden_masses() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(&dir, "zadeh.json", ZADEH_DOC);
    let out = combine(&doc, "pcr5", "json");
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["scenario"], "zadeh");
    let rule = &value["rules"][0];
    assert_eq!(rule["name"], "pcr5");
    assert!((rule["masses"]["A"].as_f64().unwrap() - 0.499851).abs() < 1e-9);
    assert!((rule["masses"]["B"].as_f64().unwrap() - 0.499851).abs() < 1e-9);
    assert!((rule["masses"]["C"].as_f64().unwrap() - 0.000298).abs() < 1e-9);
    assert!((rule["conflict"].as_f64().unwrap() - 0.9999).abs() < 1e-9);
    assert_eq!(rule["decision"], "A");
}

#[test]
fn combine_dempster_total_conflict_exits_3() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(&dir, "conflict.json", TOTAL_CONFLICT_DOC);
    let out = combine(&doc, "dempster", "table");
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("total conflict"));
}

#[test]
fn parse_errors_exit_2_with_an_addressed_message() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(
        &dir,
        "bad.json",
        r#"{"frame": ["A", "B"],
            "sources": [{"name": "weak", "masses": [{"set": ["A"], "mass": 0.9}]},
                        {"name": "ok", "masses": [{"set": "Theta", "mass": 1.0}]}]}"#,
    );
    let out = combine(&doc, "pcr5", "table");
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("weak"), "should name the source: {err}");

    let doc = write_doc(&dir, "syntax.json", "{not json");
    let out = combine(&doc, "pcr5", "table");
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("nope.json");
    let out = combine(&missing, "pcr5", "table");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_rule_check_or_format_exit_2() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(&dir, "zadeh.json", ZADEH_DOC);
    let out = combine(&doc, "pcr7", "table");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("pcr7"));

    let out = combine(&doc, "pcr5", "yaml");
    assert_eq!(out.status.code(), Some(2));

    let out = evcomb(&["bench", "--check", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    let out = evcomb(&["scenario", "zadeh", "--epsilon", "0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("epsilon"));
}

#[test]
fn scenario_zadeh_table_shows_dempster_deciding_c() {
    let out = evcomb(&[
        "scenario",
        "zadeh",
        "--epsilon",
        "0.01",
        "--rules",
        "all",
        "--format",
        "table",
    ]);
    assert!(out.status.success());
    let table = stdout(&out);
    assert!(table.contains("dempster"), "{table}");
    assert!(table.contains("0.999900000000"), "conflict row: {table}");
    let decision_line = table
        .lines()
        .find(|l| l.starts_with("decision"))
        .expect("decision row");
    // rules are columns in RuleSpec::all() order; dempster is third
    let cells: Vec<&str> = decision_line.split_whitespace().collect();
    assert_eq!(cells[3], "C", "dempster decision: {decision_line}");
}

#[test]
fn scenario_zadeh_json_matches_the_library_report() {
    let out = evcomb(&["scenario", "zadeh", "--rules", "all", "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rules = value["rules"].as_array().unwrap();
    assert_eq!(rules.len(), 8);
    let dempster = rules.iter().find(|r| r["name"] == "dempster").unwrap();
    assert_eq!(dempster["decision"], "C");
    assert_eq!(dempster["masses"]["C"].as_f64().unwrap(), 1.0);
    let checks = value["checks"].as_array().unwrap();
    assert_eq!(checks[0]["name"], "pcr5-pcr6");
    assert_eq!(checks[0]["verdict"], "pass");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for format in ["table", "json"] {
        let args = [
            "scenario",
            "zadeh",
            "--epsilon",
            "0.02",
            "--rules",
            "all",
            "--format",
            format,
        ];
        let first = stdout(&evcomb(&args));
        let second = stdout(&evcomb(&args));
        assert_eq!(first, second, "{format} output must be deterministic");
    }
    let bench_args = [
        "bench",
        "--trials",
        "50",
        "--seed",
        "11",
        "--check",
        "pcr5-pcr6",
    ];
    assert_eq!(stdout(&evcomb(&bench_args)), stdout(&evcomb(&bench_args)));
}

#[test]
fn bench_checks_pass_and_report_max_diff() {
    for check in [
        "pcr5-pcr6",
        "yamada1-pcr5",
        "eq40-pcr6",
        "mixed-disjunctive",
        "sum-to-one",
        "oracle-agreement",
    ] {
        let out = evcomb(&["bench", "--trials", "40", "--seed", "7", "--check", check]);
        assert!(
            out.status.success(),
            "{check} failed: {} {}",
            stdout(&out),
            stderr(&out)
        );
        let text = stdout(&out);
        assert!(text.contains("max_abs_diff="), "{text}");
        assert!(text.contains("verdict=pass"), "{text}");
    }

    let out = evcomb(&[
        "bench",
        "--trials",
        "25",
        "--seed",
        "3",
        "--check",
        "pcr5-pcr6",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["check"], "pcr5-pcr6");
    assert_eq!(value["trials"], 25);
    assert_eq!(value["verdict"], "pass");
    assert!(value["max_abs_diff"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn combine_accepts_policy_flags() {
    let dir = TempDir::new().unwrap();
    let doc = write_doc(&dir, "zadeh.json", ZADEH_DOC);
    let out = evcomb(&[
        "combine",
        "--input",
        doc.to_str().unwrap(),
        "--rule",
        "mixed",
        "--delta",
        "fixed:0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // conflicting pairs still route to unions; the (C,C) pair now splits
    // half to C, half to C∪C = C, so C keeps its 0.0001
    let mixed = &value["rules"][0];
    assert!((mixed["masses"]["C"].as_f64().unwrap() - 0.0001).abs() < 1e-9);

    let out = evcomb(&[
        "combine",
        "--input",
        doc.to_str().unwrap(),
        "--rule",
        "mixed",
        "--delta",
        "fixed:1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = evcomb(&[
        "combine",
        "--input",
        doc.to_str().unwrap(),
        "--rule",
        "cbc",
        "--lambda",
        "entropy",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
