use std::process::{Command, Output};

fn qproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qproj")).args(args).env_remove("QPROJ_JOBS").output().expect("run qproj")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn operator_suite_passes_and_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for (path, jobs) in paths.iter().zip(["1", "3"]) {
        let out = qproj(&[
            "verify",
            "--dim",
            "2",
            "--t",
            "1/2",
            "--suite",
            "operators",
            "--jobs",
            jobs,
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let results: Vec<serde_json::Value> = serde_json::from_slice(&a).unwrap();
    assert!(!results.is_empty());
    assert!(results
        .iter()
        .all(|r| r["status"] == "pass" && r["residual_terms"] == 0 && r["t"] == "1/2" && r["n"] == 2));
}

#[test]
fn symbolic_classical_suite_passes() {
    let out = qproj(&["verify", "--dim", "3", "--symbolic", "--suite", "classical"]);
    assert_eq!(out.status.code(), Some(0));
    let results = json(&out);
    assert!(results.as_array().unwrap().iter().all(|r| r["status"] == "pass" && r["t"] == "1"));
}

#[test]
fn negative_controls_fail_without_failing_the_run() {
    let out = qproj(&["verify", "--dim", "2", "--t", "3", "--suite", "bimodule", "--engine", "rewrite"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let results = json(&out);
    let controls: Vec<_> =
        results.as_array().unwrap().iter().filter(|r| r["id"].as_str().unwrap().contains("control")).collect();
    assert_eq!(controls.len(), 3);
    assert!(controls.iter().all(|r| r["status"] == "fail" && r["residual_terms"].as_u64().unwrap() > 0));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["verify", "--suite", "nonsense"][..],
        &["verify", "--engine", "fast"],
        &["verify", "--t", "1/0"],
        &["verify", "--t", "0"],
        &["verify", "--dim", "1"],
        &["verify", "--t", "1/2", "--symbolic"],
        &["dump", "operator", "Nope"],
        &["dump", "element", "p[9,9]"],
        &["frobnicate"],
    ] {
        assert_eq!(qproj(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn operator_dump_has_the_documented_shape() {
    let out = qproj(&["dump", "operator", "Ep", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let d = json(&out);
    assert_eq!(d["signature_in"], serde_json::json!(["V", "V*"]));
    assert_eq!(d["signature_out"], serde_json::json!([]));
    let entries = d["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        assert_eq!(e[0].as_array().unwrap().len(), 2);
        assert!(e[2].as_str().unwrap().contains('/'));
    }
}

#[test]
fn element_dump_has_the_documented_shape() {
    let out = qproj(&["dump", "element", "p dp", "--dim", "2", "--t", "2/3"]);
    assert_eq!(out.status.code(), Some(0));
    let d = json(&out);
    let words = d["words"].as_array().unwrap();
    assert!(!words.is_empty());
    for w in words {
        let types = w["types"].as_array().unwrap();
        for c in w["coeffs"].as_array().unwrap() {
            assert_eq!(c[0].as_array().unwrap().len(), 4 + types.len());
            assert!(c[1].as_str().unwrap().contains('/'));
        }
    }
}
