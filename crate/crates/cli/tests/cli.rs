use std::path::PathBuf;
use std::process::{Command, Output};

use fibclose::certificate::{Certificate, Verdict};

fn fibclose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibclose"))
        .args(args)
        .env_remove("FIBCLOSE_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fibclose-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn data_rows(out: &str) -> usize {
    out.lines().skip(1).filter(|l| !l.starts_with('#')).count()
}

#[test]
fn search_targets() {
    let pairs = fibclose(&["search", "--n-max", "250", "--target", "pairs"]);
    assert!(pairs.status.success());
    assert_eq!(data_rows(&stdout(&pairs)), 52);
    assert!(stdout(&pairs).contains("\n42 29 28\n"));
    let lucas = fibclose(&["search", "--n-max", "250", "--target", "lucas"]);
    assert_eq!(data_rows(&stdout(&lucas)), 9);
    let single = fibclose(&["search", "--n-max", "250", "--target", "single"]);
    assert_eq!(data_rows(&stdout(&single)), 8);
    assert!(stdout(&single).contains("\n34 32\n"));
}

#[test]
fn search_writes_json() {
    let path = scratch("pairs.json");
    let o = fibclose(&["search", "--n-max", "60", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["triples"].as_array().unwrap().len(), 52);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fibclose(&["search", "--target", "triples"]).status.code(), Some(2));
    assert_eq!(fibclose(&["search", "--n-max", "20000"]).status.code(), Some(2));
    assert_eq!(fibclose(&["prove", "--stage", "nope"]).status.code(), Some(2));
    assert_eq!(fibclose(&["reduce", "--mu", "pi"]).status.code(), Some(2));
    assert_eq!(fibclose(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn precision_cap_exits_3() {
    let o = fibclose(&["--precision", "32", "--max-precision", "64", "cf", "--count", "80"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let env = Command::new(env!("CARGO_BIN_EXE_fibclose"))
        .args(["--max-precision", "64", "cf", "--count", "80"])
        .env("FIBCLOSE_PRECISION", "32")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    assert_eq!(fibclose(&["--precision", "8", "cf"]).status.code(), Some(2));
}

#[test]
fn reduce_first_round_defaults() {
    let o = fibclose(&["reduce"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("convergent_index 67"));
    assert!(out.contains("epsilon >= 1.0387760"));
    assert!(out.contains("w_bound 158"));
}

#[test]
fn reduce_degenerate_and_sweep_member() {
    let degenerate = fibclose(&["reduce", "--mu", "phi:2", "--a-coeff", "4/log_alpha", "--base", "sqrt(2)", "--m", "13000000000000000"]);
    assert_eq!(degenerate.status.code(), Some(1));
    assert!(stdout(&degenerate).contains("degenerate"));
    let member = fibclose(&["reduce", "--mu", "phi:7", "--a-coeff", "4/log_alpha", "--base", "sqrt(2)", "--m", "13000000000000000"]);
    assert!(member.status.success());
    let bound: u32 = stdout(&member)
        .lines()
        .find_map(|l| l.strip_prefix("w_bound "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(bound > 1 && bound <= 140);
}

#[test]
fn cf_prints_convergents() {
    let o = fibclose(&["cf", "--count", "37"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("\n17 134 "));
    assert!(out.contains(" 54471843954966727\n"));
}

#[test]
fn bounds_prints_both_cases() {
    let o = fibclose(&["bounds"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("case1 n_max 63997643640139748387141508696"));
}

#[test]
fn prove_stage_filter_and_files() {
    let path = scratch("cert.json");
    let o = fibclose(&["prove", "--stage", "reduction1", "--stage", "degenerate", "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cert = Certificate::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert.stages, vec!["reduction1", "degenerate"]);
    assert_eq!(cert.overall, Verdict::Pass);
    let text = std::fs::read_to_string(path.with_extension("txt")).unwrap();
    assert!(text.contains("step reduction1.first PASS"));
    assert!(text.ends_with("overall PASS\n"));
}

#[test]
fn prove_precision_does_not_change_verdicts() {
    let a = fibclose(&["prove", "--stage", "reduction1"]);
    let b = fibclose(&["--precision", "512", "prove", "--stage", "reduction1"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn prove_with_broken_golden_file_fails() {
    let golden = scratch("golden.txt");
    std::fs::write(&golden, "1 1 1\n2 i 1\n").unwrap();
    let o = fibclose(&["prove", "--stage", "enumeration", "--golden", golden.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("enumeration.appendix"));
}
