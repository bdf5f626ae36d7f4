//! End-to-end tests of the `hypergen` binary: exit codes, report
//! determinism and cross-command compatibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypergen"))
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_realisable_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2 1 1\n");
    let b = write(dir.path(), "b.txt", "3 2 1\n");
    let out = run(&[
        "check",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("realisable"));
}

#[test]
fn check_unrealisable_exits_one_with_prefix_index() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "3 1\n");
    let b = write(dir.path(), "b.txt", "2 2\n");
    let out = run(&[
        "check",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("not realisable"));
    assert!(text.contains("index 1"), "missing prefix index: {text}");
}

#[test]
fn malformed_sequence_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 x\n");
    let b = write(dir.path(), "b.txt", "2 2\n");
    let out = run(&[
        "check",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_two() {
    let out = run(&["check", "--degrees", "/nonexistent/a.txt", "--dimensions", "/nonexistent/b.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_error_exits_two() {
    let out = run(&["generate", "--samples", "zzz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_output_reextracts_to_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2 1 1\n");
    let b = write(dir.path(), "b.txt", "3 2 1\n");
    let edge_path = dir.path().join("edges.txt");
    let out = run(&[
        "construct",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
        "--output",
        edge_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&edge_path).unwrap();
    let parsed = hypergen::io::parse_hypergraph_edgelist(&text).unwrap();
    assert_eq!(parsed.hypergraph.degree_sequence().0.values(), &[2, 2, 1, 1]);
    assert_eq!(parsed.hypergraph.dimension_sequence().values(), &[3, 2, 1]);
}

#[test]
fn generate_reports_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "3 2 2 1 1 1\n");
    let b = write(dir.path(), "b.txt", "4 3 2 1\n");
    let mut bytes = Vec::new();
    for (name, threads) in [("r1.json", "1"), ("r2.json", "1"), ("r4.json", "4")] {
        let path = dir.path().join(name);
        let status = bin()
            .args([
                "generate",
                "--degrees",
                a.to_str().unwrap(),
                "--dimensions",
                b.to_str().unwrap(),
                "--samples",
                "64",
                "--seed",
                "9",
                "--output",
                path.to_str().unwrap(),
            ])
            .env("HYPERGEN_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1], "same command+seed must be byte-identical");
    assert_eq!(bytes[0], bytes[2], "thread count must not affect the report");
}

#[test]
fn estimate_consumes_generate_and_mcmc_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2 1 1\n");
    let b = write(dir.path(), "b.txt", "3 2 1\n");
    let gen_path = dir.path().join("gen.json");
    let mcmc_path = dir.path().join("mcmc.json");

    let st = run(&[
        "generate",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
        "--samples",
        "100",
        "--seed",
        "5",
        "--output",
        gen_path.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(0));

    let st = run(&[
        "mcmc",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
        "--samples",
        "50",
        "--lag",
        "3",
        "--burn-in",
        "30",
        "--seed",
        "5",
        "--output",
        mcmc_path.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(0));

    for path in [&gen_path, &mcmc_path] {
        let out = run(&["estimate", "--input", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "estimate failed on {path:?}");
        assert!(stdout(&out).contains("estimate="));
    }

    // mcmc reports carry zero log-probabilities, so SNIS with 1/P
    // weights reduces to the report's plain mean
    let report = hypergen::io::read_samples_report(&mcmc_path).unwrap();
    let out = run(&[
        "estimate",
        "--input",
        mcmc_path.to_str().unwrap(),
        "--weight-mode",
        "paper",
    ]);
    let text = stdout(&out);
    let estimate: f64 = text
        .split("estimate=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((estimate - report.estimate.unwrap()).abs() < 1e-9);
}

#[test]
fn generate_csv_has_one_row_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2\n");
    let b = write(dir.path(), "b.txt", "2 2\n");
    let csv_path = dir.path().join("samples.csv");
    let st = run(&[
        "generate",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
        "--samples",
        "7",
        "--format",
        "csv",
        "--output",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sample_index,log_prob,log_multiplicity,cc");
    assert_eq!(lines.len(), 8);
}

#[test]
fn generate_rejects_unrealisable_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "3 1\n");
    let b = write(dir.path(), "b.txt", "2 2\n");
    let out = run(&[
        "generate",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
        "--samples",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_lists_realisations_and_respects_cap() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "1 1 1\n");
    let b = write(dir.path(), "b.txt", "2 1\n");
    let out = run(&[
        "enumerate",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("3 realisation(s)"), "{text}");

    let big_a = write(dir.path(), "big_a.txt", "1 1 1 1 1 1\n");
    let big_b = write(dir.path(), "big_b.txt", "1 1 1 1 1 1\n");
    let out = run(&[
        "enumerate",
        "--degrees",
        big_a.to_str().unwrap(),
        "--dimensions",
        big_b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pseudofractal_emits_parseable_realisable_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("pf");
    let st = run(&["pseudofractal", "--t", "2", "--output-prefix", prefix.to_str().unwrap()]);
    assert_eq!(st.status.code(), Some(0));
    let a_text = std::fs::read_to_string(dir.path().join("pf.degrees.txt")).unwrap();
    let b_text = std::fs::read_to_string(dir.path().join("pf.dimensions.txt")).unwrap();
    let a = hypergen::io::parse_sequence_file(&a_text).unwrap();
    let b = hypergen::io::parse_sequence_file(&b_text).unwrap();
    assert_eq!(a.len(), 15);
    assert_eq!(b.len(), 27);
    assert!(hypergen::seq::is_realisable(&a, &b));
}

#[test]
fn mcmc_auto_lag_runs_on_pilot_chain() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2 2 1 1\n");
    let b = write(dir.path(), "b.txt", "3 2 1\n");
    let path = dir.path().join("auto.json");
    let st = run(&[
        "mcmc",
        "--degrees",
        a.to_str().unwrap(),
        "--dimensions",
        b.to_str().unwrap(),
        "--samples",
        "20",
        "--lag",
        "auto",
        "--pilot-steps",
        "400",
        "--seed",
        "11",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(st.status.code(), Some(0));
    let report = hypergen::io::read_samples_report(&path).unwrap();
    assert!(report.metadata.lag.unwrap() >= 1);
    assert_eq!(report.metadata.mode, "mcmc");
    assert_eq!(report.n_samples, 20);
}
