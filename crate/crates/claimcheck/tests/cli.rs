//! End-to-end tests of the binary: exit codes, output formats, and
//! reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_claimcheck"))
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("claimcheck-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn suite_passes_with_expected_table() {
    let out = bin().arg("suite").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("expected: ⊤ ⊤ ⊥ ⊤ ⊥"), "{text}");
    assert!(text.contains("observed: ⊤ ⊤ ⊥ ⊤ ⊥"), "{text}");
    assert!(text.contains("result: PASS"), "{text}");
}

#[test]
fn suite_globally_wrapped_fails_expectation() {
    let out = bin()
        .args(["suite", "--mode", "globally-wrapped"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("result: FAIL"), "{text}");
    // The conditional-drop spec is the one that flips.
    let phi4 = text
        .lines()
        .find(|l| l.trim_start().starts_with("phi4"))
        .unwrap();
    assert!(phi4.contains("⊥"), "{phi4}");
}

#[test]
fn suite_json_reports_pass() {
    let out = bin().args(["suite", "--output", "json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert_eq!(v["mode"], "as-written");
    assert_eq!(v["specs"].as_array().unwrap().len(), 5);
    assert_eq!(v["specs"][2]["verdict"], "fails");
    assert!(v["specs"][2]["counterexample"].is_object());
    assert!(v["specs"][0]["counterexample"].is_null());
}

#[test]
fn check_on_builtin_files_reports_the_two_failures() {
    let dir = scratch_dir("check");
    let emit = bin().arg("emit-builtin").arg(&dir).output().unwrap();
    assert_eq!(emit.status.code(), Some(0));
    let out = bin()
        .arg("check")
        .arg(dir.join("builtin.model"))
        .arg(dir.join("builtin.spec"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "failing specs exit 1");
    let text = stdout_of(&out);
    assert!(text.contains("phi1: HOLDS"), "{text}");
    assert!(text.contains("phi3: FAILS"), "{text}");
    assert!(text.contains("phi5: FAILS"), "{text}");
    assert!(text.contains("counterexample:"), "{text}");
    assert!(text.contains("warning: vacuously satisfied"), "{text}");
}

#[test]
fn check_json_matches_the_report_schema() {
    let dir = scratch_dir("check-json");
    bin().arg("emit-builtin").arg(&dir).output().unwrap();
    let out = bin()
        .arg("check")
        .arg(dir.join("builtin.model"))
        .arg(dir.join("builtin.spec"))
        .args(["--output", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 5);
    for report in reports {
        for key in [
            "name",
            "model",
            "spec",
            "mode",
            "verdict",
            "vacuous",
            "counterexample",
            "stats",
        ] {
            assert!(report.get(key).is_some(), "missing field {key}");
        }
        assert_eq!(report["model"], "builtin");
        assert!(report["stats"]["product_states"].is_u64());
        assert!(report["stats"]["elapsed_seconds"].is_f64());
    }
    assert_eq!(reports[3]["verdict"], "holds");
    assert_eq!(reports[3]["vacuous"], true);
}

#[test]
fn empty_spec_file_checks_trivially() {
    let dir = scratch_dir("empty");
    bin().arg("emit-builtin").arg(&dir).output().unwrap();
    let empty = dir.join("empty.spec");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let out = bin()
        .arg("check")
        .arg(dir.join("builtin.model"))
        .arg(&empty)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_of(&out), "");
}

#[test]
fn missing_model_file_is_a_usage_error() {
    let dir = scratch_dir("missing");
    bin().arg("emit-builtin").arg(&dir).output().unwrap();
    let out = bin()
        .arg("check")
        .arg(dir.join("does-not-exist.model"))
        .arg(dir.join("builtin.spec"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("no such file"),
        "{}",
        stderr_of(&out)
    );
}

#[test]
fn syntax_error_in_spec_is_a_usage_error() {
    let dir = scratch_dir("syntax");
    bin().arg("emit-builtin").arg(&dir).output().unwrap();
    let bad = dir.join("bad.spec");
    std::fs::write(&bad, "stage = \n").unwrap();
    let out = bin()
        .arg("check")
        .arg(dir.join("builtin.model"))
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("expected"), "{}", stderr_of(&out));
}

#[test]
fn state_cap_exceeded_exits_three() {
    let dir = scratch_dir("cap");
    let mut model = String::new();
    for i in 0..20 {
        model.push_str(&format!("var v{i} : {{a, b}};\n"));
    }
    model.push_str("init v0 = a;\n");
    for i in 0..20 {
        model.push_str(&format!("trans true -> next(v{i}) in {{a, b}};\n"));
    }
    let model_path = dir.join("big.model");
    std::fs::write(&model_path, model).unwrap();
    let spec_path = dir.join("big.spec");
    std::fs::write(&spec_path, "G (v0 = a)\n").unwrap();
    let out = bin()
        .arg("check")
        .arg(&model_path)
        .arg(&spec_path)
        .args(["--state-cap", "1000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("cap"), "{}", stderr_of(&out));
}

#[test]
fn oracle_seed_runs_are_reproducible() {
    let run = || {
        let out = bin()
            .args(["oracle", "--cases", "200", "--seed", "7"])
            .output()
            .unwrap();
        (out.status.code(), stdout_of(&out))
    };
    let (code1, text1) = run();
    let (code2, text2) = run();
    assert_eq!(code1, Some(0));
    assert_eq!(code1, code2);
    assert_eq!(text1, text2);
    assert!(text1.contains("200 cases"), "{text1}");
}

#[test]
fn oracle_zero_cases_notes_it() {
    let out = bin().args(["oracle", "--cases", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("0 cases"), "{}", stdout_of(&out));
}

#[test]
fn translate_dump_is_stable_across_runs() {
    let dir = scratch_dir("translate");
    bin().arg("emit-builtin").arg(&dir).output().unwrap();
    let dump1 = dir.join("a1.txt");
    let dump2 = dir.join("a2.txt");
    for dump in [&dump1, &dump2] {
        let out = bin()
            .arg("translate")
            .arg(dir.join("builtin.spec"))
            .arg("--automaton-dump")
            .arg(dump)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&dump1).unwrap();
    let b = std::fs::read(&dump2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("initial:"), "{text}");
    assert!(text.contains("accepting:"), "{text}");
    assert!(text.contains("-->"), "{text}");
}

#[test]
fn translate_dot_emits_graphviz() {
    let dir = scratch_dir("dot");
    bin().arg("emit-builtin").arg(&dir).output().unwrap();
    let out = bin()
        .arg("translate")
        .arg(dir.join("builtin.spec"))
        .arg("--dot")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("digraph"), "{}", stdout_of(&out));
}

#[test]
fn emitted_builtin_files_are_byte_stable() {
    let dir1 = scratch_dir("emit1");
    let dir2 = scratch_dir("emit2");
    bin().arg("emit-builtin").arg(&dir1).output().unwrap();
    bin().arg("emit-builtin").arg(&dir2).output().unwrap();
    for name in ["builtin.model", "builtin.spec"] {
        let a = std::fs::read(dir1.join(name)).unwrap();
        let b = std::fs::read(dir2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}
