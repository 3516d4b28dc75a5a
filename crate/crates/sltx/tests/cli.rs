//! End-to-end runs of the `sltx` binary: tables, exit codes, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sltx"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn test_data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

fn run(args: &[&str], cfg: &PathBuf) -> Output {
    let mut cmd = bin();
    cmd.arg(args[0]).arg(cfg).args(&args[1..]);
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// CSV rows of a table: everything after the column line that is not a comment.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column_line(text: &str) -> &str {
    text.lines().find(|l| !l.starts_with('#')).unwrap()
}

#[test]
fn solve_reference_table() {
    let o = run(&["solve", "--n-max", "5"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("# sltx 0.1.0\n"));
    assert!(text.contains("# command: solve"));
    assert!(text.lines().any(|l| l.starts_with("# spec_digest: ") && l.len() == "# spec_digest: ".len() + 64));
    assert_eq!(column_line(&text), "n,lambda_n,mu_n,bracket_lo,bracket_hi,abs_delta");
    let r = rows(&text);
    assert_eq!(r.len(), 5);
    let mu: f64 = r[0][2].parse().unwrap();
    assert!((mu - 0.538).abs() < 0.002, "{mu}");
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.lines().any(|l| l.starts_with("report: {")), "{stderr}");
}

#[test]
fn zero_count_is_a_usage_error() {
    let o = run(&["solve", "--n-max", "0"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["solve"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&["solve", "--n-max", "12", "--out", out.to_str().unwrap()], &config("matched_potential.json"));
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn overrides_change_the_digest_line_not_the_spec_digest() {
    let base = stdout(&run(&["solve", "--n-max", "3"], &config("s0_reference.json")));
    let tuned = stdout(&run(&["solve", "--n-max", "3", "--tol-override", "bracket_subdiv=12"], &config("s0_reference.json")));
    let digest = |t: &str| t.lines().find(|l| l.starts_with("# spec_digest")).unwrap().to_string();
    assert_eq!(digest(&base), digest(&tuned));
    let o = run(&["solve", "--n-max", "3", "--tol-override", "no_such_key=1"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn asym_reference_values() {
    let o = run(&["asym", "--n-max", "3"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(column_line(&text), "n,case,mu_asym");
    for (k, row) in rows(&text).iter().enumerate() {
        assert_eq!(row[1], "Case4");
        let mu: f64 = row[2].parse().unwrap();
        assert!((mu - (k + 1) as f64 * std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }
}

#[test]
fn compare_passes_on_reference_and_fails_on_sabotaged_phase() {
    let o = run(&["compare"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(rows(&text).len(), 36);
    assert!(text.lines().any(|l| l.starts_with("# verdict: PASS")));

    let o = run(&["compare"], &test_data("sabotaged_phase.json"));
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).lines().any(|l| l.starts_with("# verdict: FAIL")));

    let o = run(&["compare", "--n-lo", "9", "--n-hi", "8"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eigenfunction_samples() {
    let o = run(&["eigenfunction", "--index", "2", "--samples", "2"], &config("case2_transmission.json"));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(column_line(&text), "x,piece,u,u_prime");
    let r = rows(&text);
    assert_eq!(r.len(), 10);
    let x: Vec<f64> = r.iter().map(|row| row[0].parse().unwrap()).collect();
    assert!(x.windows(2).all(|w| w[0] <= w[1]));
    assert!(x[0] > -1.0 && *x.last().unwrap() < 1.0);
    // Each breakpoint appears as a left row then a right row.
    let at_h1: Vec<&Vec<String>> = r.iter().filter(|row| row[0].parse::<f64>().unwrap() == -0.5).collect();
    assert_eq!(at_h1.len(), 2);
    assert_eq!((at_h1[0][1].as_str(), at_h1[1][1].as_str()), ("1", "2"));
}

#[test]
fn verify_bundled_configs() {
    let o = run(&["verify"], &config("s0_reference.json"));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(column_line(&text), "stage,status,measured,tolerance,detail");
    assert_eq!(rows(&text).len(), 8);
    assert!(text.lines().any(|l| l == "# verdict: PASS"));

    let o = run(&["verify"], &config("indefinite_demo.json"));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("symmetry,SKIPPED"));
    assert!(text.contains("orthogonality,SKIPPED"));
}

#[test]
fn rejected_configs_exit_with_two() {
    let o = run(&["verify"], &test_data("negative_rho.json"));
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("ρ"), "{stderr}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"h1": -0.3, "h2": "oops"}"#).unwrap();
    let o = run(&["solve", "--n-max", "1"], &bad);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("h2"));

    let o = run(&["solve", "--n-max", "1"], &dir.path().join("missing.json"));
    assert_eq!(o.status.code(), Some(2));
}
