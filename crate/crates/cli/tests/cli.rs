//! End-to-end tests of the `harmony` binary: exit codes, file round-trips
//! and report determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_harmony"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("harmony-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Payload = everything except the run-dependent timestamp line.
fn payload(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("# timestamp:"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cell(report: &str, column: &str) -> f64 {
    let mut lines = report.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == column)
        .unwrap_or_else(|| panic!("column {column} in {header:?}"));
    let row: Vec<&str> = lines.next().expect("data row").split(',').collect();
    row[idx].parse().expect("numeric cell")
}

#[test]
fn compute_on_bell_state_succeeds() {
    let dir = tmp_dir("bell");
    let state = dir.join("bell.json");
    let out = run(&["gen", "bell", "phi+", "--output", state.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr_str(&out));

    let out = run(&["compute", "--input", state.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_str(&out);
    assert!((cell(&report, "harmony") - 1.0).abs() < 1e-12);
    assert!((cell(&report, "concurrence") - 1.0).abs() < 1e-12);
    assert!((cell(&report, "eof") - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn compute_on_separable_basis_state() {
    let dir = tmp_dir("separable");
    let state = dir.join("zero.json");
    std::fs::write(
        &state,
        r#"{"format_version":"1","n_qubits":2,"label":"|00><00|","matrix":[
            [[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
            [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
            [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
            [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]]}"#,
    )
    .unwrap();
    let out = run(&["compute", "--input", state.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    let report = stdout_str(&out);
    assert_eq!(cell(&report, "harmony"), 0.0);
    assert_eq!(cell(&report, "concurrence"), 0.0);
    assert_eq!(cell(&report, "eof"), 0.0);
    assert_eq!(cell(&report, "purity_a"), 1.0);
}

#[test]
fn compute_respects_measure_subset_and_base2() {
    let dir = tmp_dir("subset");
    let state = dir.join("bell.json");
    run(&["gen", "bell", "phi+", "--output", state.to_str().unwrap()]);

    let out = run(&[
        "compute",
        "--input",
        state.to_str().unwrap(),
        "--measures",
        "eof,concurrence",
        "--base2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_str(&out);
    let header = report
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .to_string();
    assert_eq!(header, "label,eof,concurrence");
    assert!((cell(&report, "eof") - 1.0).abs() < 1e-12, "ln2 in bits is 1");
}

#[test]
fn usage_errors_exit_1() {
    let out = run(&["sample", "--check", "properties", "--qubits", "2", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["gen", "bell", "sigma+"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("unknown Bell state"));

    let out = run(&["compute"]);
    assert_eq!(out.status.code(), Some(1), "missing required flag is a usage error");
}

#[test]
fn parse_errors_exit_2() {
    let dir = tmp_dir("parse");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"format_version\": \"1\", \"n_qubits\": 2, \"matrix\": [[").unwrap();
    let out = run(&["compute", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("line"), "parse errors carry a position");

    let missing = dir.join("missing.json");
    let out = run(&["compute", "--input", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_3_and_name_the_invariant() {
    let dir = tmp_dir("validation");

    // trace 2 instead of 1
    let off_trace = dir.join("trace.json");
    std::fs::write(
        &off_trace,
        r#"{"format_version":"1","n_qubits":1,"matrix":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#,
    )
    .unwrap();
    let out = run(&["compute", "--input", off_trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("trace"), "{}", stderr_str(&out));

    // non-Hermitian
    let skew = dir.join("skew.json");
    std::fs::write(
        &skew,
        r#"{"format_version":"1","n_qubits":1,"matrix":[[[0.5,0.0],[0.3,0.0]],[[0.0,0.0],[0.5,0.0]]]}"#,
    )
    .unwrap();
    let out = run(&["compute", "--input", skew.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("Hermitian"));

    // indefinite
    let indefinite = dir.join("indefinite.json");
    std::fs::write(
        &indefinite,
        r#"{"format_version":"1","n_qubits":1,"matrix":[[[1.2,0.0],[0.0,0.0]],[[0.0,0.0],[-0.2,0.0]]]}"#,
    )
    .unwrap();
    let out = run(&["compute", "--input", indefinite.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("positive semidefinite"));

    // wrong register size for 2-qubit measures
    let ghz = dir.join("ghz.json");
    run(&["gen", "ghz", "--output", ghz.to_str().unwrap()]);
    let out = run(&["compute", "--input", ghz.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("2-qubit measure requires n_qubits=2"));
}

#[test]
fn property_violations_exit_4() {
    // An impossible tolerance turns ordinary rounding into a violation; the
    // exit path is the same one a genuine inequality failure would take.
    let out = run(&[
        "sample", "--check", "properties", "--qubits", "2", "--n", "50", "--seed", "3",
        "--tolerance", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_str(&out).contains("property violation"));
}

#[test]
fn sample_reports_are_deterministic_and_job_independent() {
    let args_base = [
        "sample", "--check", "properties", "--qubits", "2", "--n", "60", "--seed", "11",
    ];
    let a = run(&[&args_base[..], &["--jobs", "1"]].concat());
    let b = run(&[&args_base[..], &["--jobs", "4"]].concat());
    assert_eq!(a.status.code(), Some(0), "{}", stderr_str(&a));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(payload(&stdout_str(&a)), payload(&stdout_str(&b)));

    let c = run(&[&args_base[..], &["--seed", "12"]].concat());
    // clap keeps the last occurrence of --seed
    assert_ne!(payload(&stdout_str(&a)), payload(&stdout_str(&c)));
}

#[test]
fn state_files_roundtrip_exactly() {
    let dir = tmp_dir("roundtrip");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "gen", "random", "--qubits", "2", "--rank", "3", "--seed", "5",
            "--output", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    // identical seeds produce byte-identical files
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    // and computed measures parse back identically from the file
    // (drop the metadata block: it embeds the differing input paths)
    let rows = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let r1 = stdout_str(&run(&["compute", "--input", a.to_str().unwrap()]));
    let r2 = stdout_str(&run(&["compute", "--input", b.to_str().unwrap()]));
    assert_eq!(rows(&r1), rows(&r2));
}

#[test]
fn monogamy_and_corollary_campaigns_pass() {
    let out = run(&[
        "sample", "--check", "monogamy", "--qubits", "3", "--n", "150", "--seed", "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    let report = stdout_str(&out);
    assert!(report.contains("# min_residual:"));

    let out = run(&[
        "sample", "--check", "corollary", "--qubits", "3", "--n", "120", "--seed", "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    assert!(stdout_str(&out).contains("# max_corollary_lhs:"));
}

#[test]
fn verify_eof_single_state_has_tiny_gap() {
    let dir = tmp_dir("eof");
    let state = dir.join("bell.json");
    run(&["gen", "bell", "phi+", "--output", state.to_str().unwrap()]);
    let out = run(&[
        "verify-eof", "--input", state.to_str().unwrap(), "--k", "4", "--restarts", "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    let report = stdout_str(&out);
    assert!(cell(&report, "gap").abs() <= 1e-9, "pure state has a unique decomposition");
}

#[test]
fn verify_eof_rejects_k_below_rank() {
    let dir = tmp_dir("eofk");
    let state = dir.join("rank4.json");
    run(&[
        "gen", "random", "--qubits", "2", "--rank", "4", "--seed", "9",
        "--output", state.to_str().unwrap(),
    ]);
    let out = run(&[
        "verify-eof", "--input", state.to_str().unwrap(), "--k", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("K ≥ rank"));
}

#[test]
fn bench_emits_three_route_columns() {
    let out = run(&["bench", "--n", "24", "--repetitions", "3", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    let report = stdout_str(&out);
    let header = report.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "statistic,polynomial_ns,eigenvalue_ns,hermitian_r_ns");
    assert!(report.contains("# correctness_max_discrepancy:"));
    assert!(report.contains("# poly_faster_than_eigenvalue:"));
}

#[test]
fn gen_writes_three_qubit_states() {
    let dir = tmp_dir("gen3q");
    for (name, args) in [("ghz", vec!["gen", "ghz"]), ("w", vec!["gen", "w"])] {
        let path = dir.join(format!("{name}.json"));
        let mut full = args.clone();
        full.extend(["--output", path.to_str().unwrap()]);
        let out = run(&full);
        assert!(out.status.success(), "{}", stderr_str(&out));
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["n_qubits"], 3);
        assert_eq!(parsed["matrix"].as_array().unwrap().len(), 8);
    }
}

#[test]
fn gen_nonconvexity_writes_three_consistent_files() {
    let dir = tmp_dir("nonconvexity");
    let base = dir.join("nc.json");
    let out = run(&["gen", "nonconvexity", "0.6", "--output", base.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr_str(&out));

    let expect = [("plus", 0.4096), ("minus", 0.4096), ("mixture", 0.64)];
    for (suffix, want) in expect {
        let path: &Path = &dir.join(format!("nc_{suffix}.json"));
        assert!(path.exists(), "missing {}", path.display());
        let report = stdout_str(&run(&["compute", "--input", path.to_str().unwrap()]));
        let h = cell(&report, "harmony");
        assert!((h - want).abs() < 1e-12, "{suffix}: harmony {h} vs {want}");
    }
}
