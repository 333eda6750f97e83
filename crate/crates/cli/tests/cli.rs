use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn holonomic(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holonomic"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn synth_output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.json"), r#"{"target":"T","n_loops":2,"seed":3}"#).unwrap();
    let a = holonomic(dir.path(), &["synth", "--input", "p.json", "--jobs", "1"]);
    let b = holonomic(dir.path(), &["synth", "--input", "p.json", "--jobs", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["fidelity"].as_f64().unwrap() >= 0.999);
}

#[test]
fn seed_flag_overrides_problem_seed() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("p.json"),
        r#"{"target":"H","n_loops":2,"seed":1,"restarts":2}"#,
    )
    .unwrap();
    let a = holonomic(dir.path(), &["synth", "--input", "p.json"]);
    let b = holonomic(dir.path(), &["synth", "--input", "p.json", "--seed", "1"]);
    let c = holonomic(dir.path(), &["synth", "--input", "p.json", "--seed", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn identity_target_single_loop() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("i.json"), r#"{"target":"I","n_loops":1,"restarts":64}"#).unwrap();
    let o = holonomic(dir.path(), &["synth", "--input", "i.json", "--output", "r.json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert!(v["fidelity"].as_f64().unwrap() >= 0.999, "{v}");
}

#[test]
fn synthesized_result_feeds_gate_phases_and_rb() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.json"), r#"{"target":"P","n_loops":2,"seed":7}"#).unwrap();
    assert_eq!(
        code(&holonomic(
            dir.path(),
            &["synth", "--input", "p.json", "--output", "res.json"]
        )),
        0
    );

    assert_eq!(
        code(&holonomic(
            dir.path(),
            &["gate", "--input", "res.json", "--target", "P"]
        )),
        0
    );
    // a passing sequence checked against the wrong target is a check failure
    assert_eq!(
        code(&holonomic(
            dir.path(),
            &["gate", "--input", "res.json", "--target", "X"]
        )),
        1
    );
    assert_eq!(code(&holonomic(dir.path(), &["phases", "--input", "res.json"])), 0);

    let rb = holonomic(
        dir.path(),
        &[
            "rb",
            "--input",
            "res.json",
            "--target",
            "P",
            "--output",
            "rb.json",
            "--m-values",
            "2,4,8",
            "--n-seq",
            "6",
        ],
    );
    assert_eq!(code(&rb), 0);
    let csv = fs::read_to_string(dir.path().join("rb_reference.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("m,mean_fidelity,stderr"));
    assert_eq!(lines.count(), 3);
    assert!(dir.path().join("rb_interleaved.csv").exists());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("rb.json")).unwrap()).unwrap();
    assert!(v["gate_fidelity"].as_f64().unwrap() >= 0.999);
}

#[test]
fn ideal_gate_rb_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let o = holonomic(dir.path(), &["rb", "--gate", "X", "--n-seq", "4"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["reference"]["fit"]["p"], 1.0);
    assert_eq!(v["interleaved"]["fit"]["p"], 1.0);
    assert_eq!(v["gate_fidelity"], 1.0);
}

#[test]
fn qpt_counts_settings() {
    let dir = tempfile::tempdir().unwrap();
    let o = holonomic(dir.path(), &["qpt", "--gate", "CNOT"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["settings"], 240);
    assert_eq!(v["process_fidelity"], 1.0);
    let o = holonomic(dir.path(), &["qpt", "--gate", "H", "--noise-eps", "0.1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["settings"], 12);
    assert!(v["process_fidelity"].as_f64().unwrap() < 1.0);
}

#[test]
fn tables_report_lists_failures() {
    let dir = tempfile::tempdir().unwrap();
    let o = holonomic(dir.path(), &["tables"]);
    // the bundled P and T loops realize the adjoint gates
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("P: fidelity") && err.contains("T: fidelity"), "{err}");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tables"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_di_on_bundled_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = holonomic(dir.path(), &["verify-di", "--grid", "16"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    fs::write(
        dir.path().join("acyclic.json"),
        r#"{"n":1,"segments":[{"omega_drive":[1.0],"omega_rot":[2.0],"phase":[0.0],"detuning":[1.0],"duration":1.0}]}"#,
    )
    .unwrap();
    for args in [
        vec!["synth", "--input", "bad.json"],
        vec!["synth", "--input", "missing.json"],
        vec!["synth", "--target", "nope"],
        vec!["gate"],
        vec!["gate", "--input", "acyclic.json"],
        vec!["rb", "--gate", "CNOT"],
        vec!["rb", "--gate", "X", "--noise-eps", "2"],
        vec!["qpt"],
        vec!["synth", "--target", "X", "--jobs", "0"],
        vec!["frobnicate"],
    ] {
        let o = holonomic(dir.path(), &args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
}
