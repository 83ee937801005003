//! End-to-end tests of the binary: exit codes, output formats, and the
//! determinism contract.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multigamma"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_theta0_prints_value_and_bound() {
    let o = run(&["eval", "theta0", "--z", "0.25+0.5i", "--tau", "0+1i"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("value = "), "{s}");
    assert!(s.contains("error_bound = "), "{s}");
    assert!(s.contains("representation = "), "{s}");
}

#[test]
fn eval_bernoulli_midpoint_is_zero() {
    let o = run(&[
        "eval",
        "bernoulli",
        "--r",
        "1",
        "--n",
        "1",
        "--z",
        "0.5",
        "--omega",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value = 0+0i"), "{}", stdout(&o));
}

#[test]
fn eval_theta0_lattice_hit_is_flagged_zero() {
    let o = run(&["eval", "theta0", "--z", "0", "--tau", "0+1i"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("value = 0+0i"), "{s}");
    assert!(s.contains("on zero lattice"), "{s}");
}

#[test]
fn check_jacobi_passes() {
    let o = run(&["check", "jacobi", "--z", "0.3+0.1i", "--tau", "0+1i"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass = true"));
}

#[test]
fn check_jacobi_json_residual_is_tiny() {
    let o = run(&[
        "check", "jacobi", "--z", "0.3+0.1i", "--tau", "0+1i", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["report"]["rel_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn eval_theta0_json_matches_library() {
    let o = run(&[
        "eval",
        "theta0",
        "--z",
        "0.25+0.5i",
        "--tau",
        "0+1i",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let re = v["value"][0].as_f64().unwrap();
    let im = v["value"][1].as_f64().unwrap();
    let expect = multigamma::gammafuncs::theta0(
        multigamma::Complex64::new(0.25, 0.5),
        multigamma::Complex64::new(0.0, 1.0),
        &multigamma::TruncationPolicy::default(),
    )
    .unwrap()
    .value;
    assert!((re - expect.re).abs() < 1e-14);
    assert!((im - expect.im).abs() < 1e-14);
}

#[test]
fn check_modular_product_alias() {
    let o = run(&[
        "check", "thm4.1", "--r", "2", "--z", "0.4+0.3i", "--omega", "1,0+1i",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass = true"));
}

#[test]
fn malformed_literal_exits_2() {
    let o = run(&["check", "jacobi", "--z", "0.3 + 0.1i", "--tau", "0+1i"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid complex literal"));
}

#[test]
fn inadmissible_domain_exits_3() {
    // Im(tau/sigma) = 0 violates the sign-pattern precondition
    let o = run(&[
        "check", "fv", "--z", "0.3+0.2i", "--tau", "0+1i", "--sigma", "0+2i",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn failing_identity_exits_1() {
    // an absurd threshold turns a passing check into a reported failure
    let o = run(&[
        "check",
        "jacobi",
        "--z",
        "0.3+0.1i",
        "--tau",
        "0+1i",
        "--series-threshold",
        "1e-30",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pass = false"));
}

#[test]
fn sweep_is_byte_identical_for_fixed_seed() {
    let args = [
        "sweep", "thm4.2", "--r", "1", "--count", "10", "--seed", "1", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn sweep_summary_line() {
    let o = run(&["sweep", "fv", "--count", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("pass_count = 5/5"), "{s}");
    assert!(s.contains("seed = 7"), "{s}");
}

#[test]
fn sweep_count_zero_exits_2() {
    let o = run(&["sweep", "jacobi", "--count", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_identity_exits_2() {
    let o = run(&["check", "nope", "--z", "1", "--tau", "0+1i"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_json_emits_record_per_suite() {
    let o = run(&["selftest", "--json", "--samples", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut suites = 0;
    for line in s.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid JSON per line");
        assert_eq!(v["schema"], 1);
        assert!(v["pass"].as_bool().unwrap(), "suite failed: {line}");
        suites += 1;
    }
    assert!(suites >= 15, "expected one record per suite, got {suites}");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("multigamma-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eval.json");
    let o = run(&[
        "eval",
        "psi2",
        "--z",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(contents.trim()).unwrap();
    assert_eq!(v["schema"], 1);
    // ψ2(1) = exp(πi/12)
    let re = v["value"][0].as_f64().unwrap();
    let im = v["value"][1].as_f64().unwrap();
    assert!((re - (std::f64::consts::PI / 12.0).cos()).abs() < 1e-9);
    assert!((im - (std::f64::consts::PI / 12.0).sin()).abs() < 1e-9);
    std::fs::remove_file(&path).ok();
}

#[test]
fn eval_csv_has_header_and_row() {
    let o = run(&[
        "eval",
        "q-polylog",
        "--x",
        "0.25",
        "--q",
        "0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("target,value_re"));
    assert!(lines[1].starts_with("q-polylog,"));
}
