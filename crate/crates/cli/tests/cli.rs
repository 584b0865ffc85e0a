use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_acmoduli"));
    c.env_remove("AC_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (
        serde_json::from_slice(&o.stdout).expect("json report"),
        o.status.code().unwrap(),
    )
}

#[test]
fn unbalanced_input_exits_2() {
    let o = run(&["parse", "(()"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UNBALANCED"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["check", "--theorem", "3.3", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["enumerate", "--kind", "par"]).status.code(), Some(2));
    assert_eq!(
        run(&["star", "--n", "6", "--k", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["parametrize", "--n", "5", "--tail", "1,1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn battery_passes() {
    let (v, code) = json(&["check", "--theorem", "7.2", "--n", "8", "--count", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "check");
    assert_eq!(v["results"].as_array().unwrap().len(), 14);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = [
        "--format",
        "json",
        "sample",
        "()<()|()()>()",
        "--style",
        "bra",
        "--const",
        "3/7",
        "--count",
        "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_env_applies_only_without_flag() {
    let args = [
        "--format", "json", "sample", "(())", "--style", "par", "--count", "3",
    ];
    let default = run(&args);
    let env = bin().args(args).env("AC_SEED", "7").output().unwrap();
    let flag = bin()
        .args(args)
        .args(["--seed", "7"])
        .env("AC_SEED", "99")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["params"]["seed"], 7);
    assert_ne!(default.stdout, env.stdout);
    assert_eq!(env.stdout, flag.stdout);
}

#[test]
fn content_and_transform_text() {
    assert_eq!(
        stdout(&run(&["content", "()<()|()()>()"])).trim(),
        "⟨3,5|6,8,10⟩ {{1},{4},{7},{9},{12}}"
    );
    assert_eq!(
        stdout(&run(&["transform", "--kind", "ass", "(())()(())"])).trim(),
        "()(()(()))"
    );
    assert_eq!(
        stdout(&run(&["transform", "--kind", "ass-to-tbra", "<()|(())>()"])).trim(),
        "<()|(())|()>"
    );
    let o = run(&["transform", "--kind", "ass-braket", "()<|>"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_and_rank() {
    let (v, _) = json(&["enumerate", "--kind", "tbra", "--n", "2"]);
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
    let (v, _) = json(&["rank", "(()())"]);
    assert_eq!(v["results"][0]["ranks"]["1"], 2);
    assert_eq!(v["results"][0]["height"], 2);
}

#[test]
fn continuants() {
    assert_eq!(
        stdout(&run(&["u", "eval", "0", "-1", "1", "1", "2"])).trim(),
        "u[1,5] = 1"
    );
    let (v, _) = json(&["u", "poly", "--range", "1", "3", "--nvars", "3"]);
    assert_eq!(v["results"][0]["poly"], "x1*x2*x3 - x1 - x3");
    let (v, code) = json(&["identities", "--nmax", "6"]);
    assert_eq!(code, 0);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn groebner_and_parametrize() {
    let (v, code) = json(&["groebner", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["pairwise_coprime"], true);
    let (v, code) = json(&["parametrize", "--n", "5", "--tail", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["results"][0]["point"],
        serde_json::json!(["0", "-1", "1", "1", "2"])
    );
}

#[test]
fn polyset_text() {
    let out = stdout(&run(&["polyset", "<||>", "--style", "tbra-two"]));
    assert_eq!(out.trim(), "{(x1)*(x2) - 2, (x2)*(x3) - 2}");
}

#[test]
fn polygon_exit_codes_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("pent.svg");
    let o = run(&[
        "polygon",
        "--coeffs",
        "0,-1,1,1,2",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polygon").count(), 6);
    assert_eq!(
        run(&["polygon", "--coeffs", "0,0,0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["polygon", "--coeffs", "1,1,1", "--p0", "1,1", "--p1", "2,2"])
            .status
            .code(),
        Some(2)
    );

    let report = dir.path().join("report.json");
    let o = run(&[
        "--format",
        "json",
        "--output",
        report.to_str().unwrap(),
        "polygon",
        "--coeffs",
        "-1,-1,-1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["results"][0]["closed"], true);
    assert_eq!(v["results"][0]["areas"], serde_json::json!(["1", "1", "1"]));
}

#[test]
fn star_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("star.svg");
    let (v, code) = json(&[
        "star",
        "--n",
        "5",
        "--k",
        "2",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!((v["results"][0]["coefficient"].as_f64().unwrap() + 1.618033988749895).abs() < 1e-12);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && !text.contains("NaN"));
}

#[test]
fn quad_cases() {
    let verdict = |p3: &str| {
        let pts = format!("0,1,-1,0,0,-1,{p3}");
        let (v, _) = json(&["quad", "--points", &pts]);
        v["results"][0]["verdict"].as_str().unwrap().to_string()
    };
    assert_eq!(verdict("1,5"), "HAS_CENTER_VIA_120");
    assert_eq!(verdict("3,0"), "HAS_CENTER_VIA_119");
    assert_eq!(verdict("2,3"), "NONE");
    assert_eq!(run(&["quad", "--points", "1,2,3"]).status.code(), Some(2));
}
