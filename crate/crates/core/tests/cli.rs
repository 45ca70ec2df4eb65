use std::path::Path;
use std::process::{Command, Output};

use cakecut::cake::{Cake, Fraction};
use cakecut::engine::{parse_json_lines, replay, Rule};

fn cakecut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cakecut")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simulate_bp_five() {
    let o = cakecut(&["simulate", "--rule", "bp", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("share 1/5").count(), 5);
    assert!(text.contains("cuts: 4"));
    assert!(text.contains("queries: 13"));
}

#[test]
fn simulate_vanilla_four_csv() {
    let o = cakecut(&["simulate", "--rule", "vanilla", "--n", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let shares: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().to_string())
        .collect();
    assert_eq!(shares, ["1/2", "1/4", "1/8", "1/8"]);
}

#[test]
fn simulate_single_player() {
    let o = cakecut(&["simulate", "--rule", "bp", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cuts: 0"));
    assert!(stdout(&o).contains("share 1\n"));
}

#[test]
fn simulate_json_and_trace_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.jsonl");
    let o = cakecut(&[
        "simulate", "--rule", "bp", "--n", "4", "--epsilon", "-1/20", "--format", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["cuts"], 3);
    let events = parse_json_lines(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let partition = replay(&Cake::unit(), 4, Rule::BiggestPlayer, &events).unwrap();
    let p1 = report["pieces"][0]["share"].clone();
    let share: Fraction = serde_json::from_value(p1).unwrap();
    assert_eq!(partition.shares()[0], share);
    assert_eq!(share, Fraction::new(1, 5));
}

#[test]
fn bad_arguments_are_usage_errors() {
    for args in [
        &["simulate", "--n", "0"][..],
        &["simulate", "--rule", "dictator", "--n", "3"],
        &["simulate", "--n", "3", "--profile", "first-cut=3/2"],
        &["simulate", "--n", "3", "--profile", "colour=red"],
        &["simulate", "--n", "3", "--profile", "first-cut=0.5"],
        &["check-equilibrium", "--rule", "bp", "--n", "12"],
        &["payoff-curve", "--n", "7", "--grid", "60"],
        &["bogus"],
    ] {
        let o = cakecut(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn check_equilibrium_exit_codes() {
    assert_eq!(cakecut(&["check-equilibrium", "--rule", "bp", "--n", "4", "--grid", "2520"]).status.code(), Some(0));
    assert_eq!(cakecut(&["check-equilibrium", "--rule", "vanilla", "--n", "3"]).status.code(), Some(0));
    let o = cakecut(&["check-equilibrium", "--rule", "bp", "--n", "3", "--profile", "first-cut=1/2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("improving deviation: P1 cuts 1/3 for +1/12"));
}

#[test]
fn check_equilibrium_json() {
    let o = cakecut(&["check-equilibrium", "--n", "3", "--grid", "60", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["verdict"], "no-profitable-deviation");
    assert_eq!(cert["players"][0]["best_delta"]["num"].as_i64().unwrap().signum(), -1);
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn figures_write_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = cakecut(&["figures", "--n-max", "8", "--fig2-n", "2,3", "--grid", "60", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let fig1 = read_csv(&dir.path().join("fig1.csv"));
    assert_eq!(fig1[0][..4], ["n", "gini_exact", "gini_asymptotic", "gini_limit"]);
    let six = fig1.iter().find(|r| r[0] == "6").unwrap();
    assert_eq!(six[1..3], ["49/96", "17/32"]);

    let fig2 = read_csv(&dir.path().join("fig2.csv"));
    assert_eq!(fig2[0][..5], ["epsilon_num", "epsilon_den", "payoff_norm_num", "payoff_norm_den", "n"]);
    let at = |num: &str| fig2.iter().find(|r| r[4] == "2" && r[0] == num && r[1] == "10").unwrap()[2..4].to_vec();
    assert_eq!(at("1"), at("-1"));

    let fig3 = read_csv(&dir.path().join("fig3.csv"));
    assert_eq!(fig3[0][..3], ["n", "poa_exact", "poa_asymptote"]);
    let bp = fig3[0].iter().position(|h| h == "poa_bp").unwrap();
    assert!(fig3[1..].iter().all(|r| r[bp] == "1"));
    assert_eq!(fig3.len(), 8);
}

#[test]
fn figures_unwritable_directory() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope");
    let o = cakecut(&["figures", "--n-max", "4", "--fig2-n", "2", "--grid", "10", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!missing.exists());
}

#[test]
fn figures_bad_grid_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let o = cakecut(&["figures", "--fig2-n", "7", "--grid", "10", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn payoff_curve_formats() {
    let o = cakecut(&["payoff-curve", "--n", "3", "--grid", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("0,1,1,1,3,")));
    let o = cakecut(&["payoff-curve", "--n", "3", "--grid", "30", "--format", "json"]);
    let points: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(points.as_array().unwrap().len(), 19);
}

#[test]
fn poa_outputs() {
    let o = cakecut(&["poa", "--rule", "vanilla", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("6,96/47,2,"));
    let o = cakecut(&["poa", "--rule", "bp", "--n-max", "10", "--format", "json"]);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(reports.as_array().unwrap().iter().all(|r| r["poa"] == serde_json::json!({"num": 1, "den": 1})));
}

#[test]
fn help_exits_zero() {
    assert_eq!(cakecut(&["--help"]).status.code(), Some(0));
}
