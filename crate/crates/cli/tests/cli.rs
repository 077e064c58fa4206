use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(rel)
}

fn keycomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keycomp"))
        .args(args)
        .output()
        .expect("spawn keycomp")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_exits_zero() {
    let out = keycomp(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("analyze"));
    assert_eq!(keycomp(&["verify", "--help"]).status.code(), Some(0));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(keycomp(&["analyze", "--bogus"]).status.code(), Some(1));
}

#[test]
fn analyze_csv_writes_json_report() {
    let input = data("comparisons/three_labs.csv");
    let out = keycomp(&["analyze", "--input", path(&input), "--model", "none"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["kind"], "analysis");
    let x_k = doc["report"]["doe"]["kcrv"]["x_K"].as_f64().unwrap();
    assert!((x_k - 10.076190476190476).abs() < 1e-12);
}

#[test]
fn csv_without_model_is_rejected() {
    let input = data("comparisons/three_labs.csv");
    let out = keycomp(&["analyze", "--input", path(&input)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("model"));
}

#[test]
fn output_file_and_report_rerender() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("analysis.json");
    let input = data("comparisons/systematic_budgets.csv");
    let out = keycomp(&[
        "analyze",
        "--input",
        path(&input),
        "--model",
        "systematic",
        "--output",
        path(&json),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);

    let out = keycomp(&["report", "--input", path(&json), "--format", "md"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let md = String::from_utf8(out.stdout).unwrap();
    assert!(md.contains("### unilateral degrees of equivalence"));
    assert!(md.contains("| NMI4 |"));

    let out = keycomp(&["report", "--input", path(&json), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("# "));
}

#[test]
fn duplicate_lab_names_the_lab() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("dup.csv");
    std::fs::write(&input, "lab_id,x,u_x\nPTB,1,0.1\nNIST,1.1,0.1\nPTB,2,0.1\n").unwrap();
    let out = keycomp(&["analyze", "--input", path(&input), "--model", "none"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("PTB"), "{}", stderr(&out));
}

#[test]
fn missing_input_is_an_io_error() {
    let out = keycomp(&[
        "analyze",
        "--input",
        "/definitely/not/here.csv",
        "--model",
        "none",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let input = data("comparisons/three_labs.csv");
    let out = keycomp(&[
        "analyze",
        "--input",
        path(&input),
        "--model",
        "none",
        "--output",
        "/definitely/not/here/out.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_consistency_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("split.csv");
    std::fs::write(&input, "lab_id,x,u_x\nA,1.0,0.01\nB,2.0,0.01\nC,1.5,0.01\n").unwrap();
    let lenient = keycomp(&["analyze", "--input", path(&input), "--model", "none"]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(stderr(&lenient).contains("warning"));
    let strict = keycomp(&[
        "analyze",
        "--input",
        path(&input),
        "--model",
        "none",
        "--strict-consistency",
    ]);
    assert_eq!(strict.status.code(), Some(3));
    assert!(!strict.stdout.is_empty());
}

#[test]
fn zero_replications_is_a_usage_error() {
    let spec = data("specs/none_n3.json");
    let out = keycomp(&["simulate", "--input", path(&spec), "--n-reps", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage"));
}

#[test]
fn seed_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"schema_version":1,"Y":1.0,"model":"none","n_reps":100,"distribution":"gaussian",
            "labs":[{"lab_id":"A","s_Y":0.1,"u_e":0.1},{"lab_id":"B","s_Y":0.1,"u_e":0.2}]}"#,
    )
    .unwrap();
    let out = keycomp(&["simulate", "--input", path(&spec)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("seed"));
    let out = keycomp(&["simulate", "--input", path(&spec), "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn corrupted_spec_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"schema_version":1,"Y":1.0,"model":"none","labs":[{"#,
    )
    .unwrap();
    let out = keycomp(&["verify", "--input", path(&spec), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_passes_and_fails_with_exit_codes() {
    let ok = keycomp(&[
        "verify",
        "--input",
        path(&data("specs/systematic_equal_n3.json")),
        "--n-reps",
        "20000",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let doc: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["report"]["all_pass"], true);

    // One true value shared by all labs per replication correlates the
    // results, which the uncertainty formulas do not allow for.
    let bad = keycomp(&[
        "verify",
        "--input",
        path(&data("specs/systematic_shared_n3.json")),
    ]);
    assert_eq!(bad.status.code(), Some(4));
    assert!(stderr(&bad).contains("checks outside"));
}

#[test]
fn seed_override_changes_simulation() {
    let spec = data("specs/none_n3.json");
    let run = |seed: &str| {
        keycomp(&[
            "simulate",
            "--input",
            path(&spec),
            "--n-reps",
            "1000",
            "--seed",
            seed,
        ])
        .stdout
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));
}
