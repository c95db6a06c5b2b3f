//! End-to-end checks of the command-line surface: exit codes, output shape,
//! and flag handling.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lexcbs"))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("lexcbs-cli-{}-{name}", std::process::id()));
    fs::write(&path, contents).unwrap();
    path
}

fn crossing_map() -> PathBuf {
    temp_file(
        "cross.map",
        "type octile\nheight 2\nwidth 3\nmap\n...\n...\n",
    )
}

fn crossing_scen() -> PathBuf {
    temp_file(
        "cross.scen",
        "version 1\n0\tcross.map\t3\t2\t0\t1\t2\t1\t2\n0\tcross.map\t3\t2\t2\t1\t0\t1\t2\n",
    )
}

fn corridor_map() -> PathBuf {
    temp_file("corridor.map", "type octile\nheight 1\nwidth 3\nmap\n...\n")
}

fn corridor_scen() -> PathBuf {
    temp_file(
        "corridor.scen",
        "version 1\n0\tc.map\t3\t1\t0\t0\t2\t0\t2\n0\tc.map\t3\t1\t2\t0\t0\t0\t2\n",
    )
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn solve_prints_cost_and_exits_zero() {
    let map = crossing_map();
    let scen = crossing_scen();
    let output = bin()
        .args(["solve", "--map"])
        .arg(&map)
        .arg("--scen")
        .arg(&scen)
        .args([
            "--agents",
            "2",
            "--objectives",
            "1",
            "--cost-mode",
            "duplicated",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout(&output);
    assert!(text.contains("status: solved"));
    assert!(text.contains("cost: {6}"));
    assert!(text.contains("agent 0:"));
    assert!(text.contains("agent 1:"));
    assert!(
        text.contains("wall_ms=0"),
        "untimed run must zero wall time:\n{text}"
    );
}

#[test]
fn solve_json_document_has_the_schema_fields() {
    let map = crossing_map();
    let scen = crossing_scen();
    let output = bin()
        .args(["solve", "--map"])
        .arg(&map)
        .arg("--scen")
        .arg(&scen)
        .args(["--agents", "2", "--objectives", "2", "--json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["status"], "solved");
    assert!(doc["cost"].as_array().is_some_and(|c| c.len() == 2));
    let agents = doc["agents"].as_array().unwrap();
    assert_eq!(agents.len(), 2);
    let first_step = &agents[0]["path"][0];
    assert_eq!(first_step.as_array().unwrap().len(), 3); // [x, y, t]
    assert!(doc["stats"]["ll_expanded"].as_u64().is_some());
}

#[test]
fn unreadable_map_is_a_usage_error() {
    let output = bin()
        .args([
            "solve",
            "--map",
            "/nonexistent/nowhere.map",
            "--agents",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("cannot read map"));
}

#[test]
fn head_on_corridor_exits_infeasible() {
    let map = corridor_map();
    let scen = corridor_scen();
    let output = bin()
        .args(["solve", "--map"])
        .arg(&map)
        .arg("--scen")
        .arg(&scen)
        .args(["--agents", "2", "--objectives", "1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3), "{output:?}");
    assert!(stdout(&output).contains("status: infeasible"));
}

#[test]
fn verify_agrees_on_enumerable_instance() {
    let map = crossing_map();
    let scen = crossing_scen();
    let output = bin()
        .args(["verify", "--map"])
        .arg(&map)
        .arg("--scen")
        .arg(&scen)
        .args(["--agents", "2", "--objectives", "2", "--horizon", "8"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    assert!(stdout(&output).contains("LEX-OK PARETO-OK"));
}

#[test]
fn verify_budget_overrun_exits_four() {
    let map = crossing_map();
    let scen = crossing_scen();
    let output = bin()
        .args(["verify", "--map"])
        .arg(&map)
        .arg("--scen")
        .arg(&scen)
        .args(["--agents", "2", "--budget", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4), "{output:?}");
}

#[test]
fn bench_emits_header_plus_one_row() {
    let map = crossing_map();
    let output = bin()
        .args(["bench", "--maps"])
        .arg(&map)
        .args([
            "--scenario-seed",
            "5",
            "--scenarios-per-map",
            "1",
            "--agents",
            "1",
            "--objectives",
            "2",
            "--time-limit",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "map,scen,agents,objectives,seed,status,wall_ms,cost,hl_exp,ll_exp"
    );
    assert!(lines[1].contains("solved"));
}

#[test]
fn scale_reports_equal_heap_ops_across_objective_counts() {
    let map = temp_file("scale.map", &{
        let mut text = String::from("type octile\nheight 6\nwidth 6\nmap\n");
        for _ in 0..6 {
            text.push_str("......\n");
        }
        text
    });
    let output = bin()
        .args(["scale", "--map"])
        .arg(&map)
        .args([
            "--agents", "2", "--d-min", "2", "--d-max", "5", "--reps", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout(&output);
    let ops: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|line| line.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(ops.len(), 4);
    assert!(
        ops.windows(2).all(|w| w[0] == w[1]),
        "heap ops differ: {ops:?}"
    );
    assert!(String::from_utf8_lossy(&output.stderr).contains("heap ops identical"));
}

#[test]
fn unknown_flags_are_errors() {
    let output = bin().args(["solve", "--frobnicate"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_lists_every_solve_flag() {
    let output = bin().args(["solve", "--help"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    for flag in [
        "--map",
        "--scen",
        "--agents",
        "--scenario-seed",
        "--objectives",
        "--cost-seed",
        "--cost-mode",
        "--cost-range",
        "--time-limit",
        "--horizon",
        "--json",
    ] {
        assert!(text.contains(flag), "solve --help missing {flag}:\n{text}");
    }
}
