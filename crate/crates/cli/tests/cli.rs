use std::process::Command;

use collapse_cli::{run, EXIT_BUDGET, EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION};

fn collapse(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["collapse"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn compare_prints_lt() {
    let (code, out, _) = collapse(&["compare", "--system", "nu=w+1,dil=omega", "p[0]({};w[])", "p[1]({};w[])"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.trim(), "LT");
    let (_, out, _) = collapse(&["compare", "--system", "nu=w+1,dil=omega", "p[w]({};w[])", "p[1]({};w[])"]);
    assert_eq!(out.trim(), "GT");
}

#[test]
fn gamma_terms_parse_and_compare() {
    let (code, out, _) = collapse(&["compare", "--grammar", "gamma", "pv(0,0)", "G(x0)"]);
    assert_eq!((code, out.trim()), (EXIT_PASS, "LT"));
    let (_, out, _) = collapse(&["member", "--grammar", "gamma", "pv(G(x0),0)"]);
    assert!(out.starts_with("false"), "{out}");
    let (code, _, err) = collapse(&["compare", "--grammar", "gamma", "pv(0,", "0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn omega_laws_pass() {
    let (code, out, _) = collapse(&["laws", "--dilator", "omega", "--max-order", "4", "--budget", "6"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.contains("pass"));
}

#[test]
fn mutant_laws_fail() {
    let (code, out, _) = collapse(&["laws", "--dilator", "reversed-omega", "--max-order", "3", "--budget", "3"]);
    assert_eq!(code, EXIT_VIOLATION, "{out}");
    assert!(out.contains("FAIL"));
    let (code, _, _) = collapse(&["bridge-bh", "--mutant", "constant-theta", "--count", "20"]);
    assert_eq!(code, EXIT_VIOLATION);
}

#[test]
fn crosscheck_confirms_isomorphism() {
    let (code, out, _) = collapse(&["crosscheck-omega", "--y-size", "3", "--count", "200"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("isomorphism confirmed on 200 elements"), "{out}");
}

#[test]
fn enumerations_are_deterministic() {
    let args = ["enumerate", "--system", "nu=2,dil=omega", "--count", "25", "--sorted"];
    let (code, a, _) = collapse(&args);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(a.lines().count(), 25);
    assert_eq!(collapse(&args).1, a);
    let (code, words, _) = collapse(&["enumerate", "--grammar", "word", "--y-size", "2", "--budget", "2"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(words.lines().count(), 6);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(collapse(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(collapse(&["compare", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(collapse(&["laws", "--dilator", "nonsense"]).0, EXIT_USAGE);
}

#[test]
fn exhausted_budgets_exit_three() {
    let (code, _, err) = collapse(&["enumerate", "--system", "nu=1,dil=affine:1,l=5,count=1000"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(err.contains("budget"));
}

#[test]
fn default_budgets_come_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_collapse");
    let out = Command::new(bin)
        .args(["enumerate", "--system", "nu=1,dil=affine:1"])
        .env("COLLAPSE_DEFAULT_BUDGETS", "count=4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 4);
    let out = Command::new(bin)
        .args(["enumerate", "--system", "nu=1,dil=affine:1"])
        .env("COLLAPSE_DEFAULT_BUDGETS", "count=1000,l=5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
    let out = Command::new(bin)
        .args(["enumerate", "--system", "nu=1,dil=affine:1"])
        .env("COLLAPSE_DEFAULT_BUDGETS", "speed=9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn export_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frag.jsonl");
    let (code, _, _) = collapse(&["export", "--system", "nu=2,dil=omega,count=5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    let text = std::fs::read_to_string(&path).unwrap();
    let first = text.lines().next().unwrap();
    assert_eq!(first, r#"{"idx":0,"term":"p[0]({}; w[])","alpha":"0","children":[],"member":true}"#);
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn seeded_gamma_laws_are_reproducible() {
    let args = ["--seed", "7", "laws", "--gamma", "--budget", "2", "--random", "50"];
    let (code, a, _) = collapse(&args);
    assert_eq!(code, EXIT_PASS, "{a}");
    assert_eq!(collapse(&args).1, a);
}
