use std::path::Path;
use std::process::{Command, Output};

use grover_rel::Extended;
use grover_rel_cli::trajectory::TrajectoryFile;

fn grover_rel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grover-rel"))
        .args(args)
        .env_remove("GROVER_REL_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no `{key}` in:\n{text}"))
}

#[test]
fn simulate_two_objects() {
    let out = grover_rel(&["simulate", "--n", "2", "--v0", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "steps_to_max"), "0");
    assert_eq!(field(&text, "max_fraction"), "5.0000000000000000e-1");
    assert_eq!(field(&text, "termination"), "first_max_found");
}

#[test]
fn simulate_single_step_extended() {
    let out = grover_rel(&["simulate", "--n", "1000", "--one-minus-v0", "2e-6", "--precision", "extended"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(field(&text, "steps_to_max"), "1");
    assert_eq!(field(&text, "precision"), "extended");
    // 34 digits
    assert!(field(&text, "max_fraction").starts_with("9.99999996001989766718448997204"));
}

#[test]
fn simulate_rejects_bad_arguments() {
    assert_eq!(grover_rel(&["simulate", "--n", "1.5", "--v0", "0.5"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["simulate", "--n", "10"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["simulate", "--n", "10", "--v0", "0.5", "--one-minus-v0", "0.5"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["simulate", "--n", "10", "--v0", "1"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["simulate", "--n", "ten", "--v0", "0.5"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["simulate", "--n", "10", "--v0", "0.5", "--precision", "quad"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["simulate", "--n", "10", "--v0", "0.5", "--max-iter", "0"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn simulate_reports_iteration_limit() {
    let out = grover_rel(&["simulate", "--n", "1e4", "--v0", "0.001", "--max-iter", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["termination"], "iteration_limit");
    assert_eq!(json["steps_to_max"], 5);
}

#[test]
fn simulate_csv() {
    let out = grover_rel(&["simulate", "--n", "100", "--v0", "0.8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), row.len());
    let steps = header.iter().position(|&h| h == "steps_to_max").unwrap();
    assert_eq!(row[steps], "2");
}

#[test]
fn trajectory_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.json");
    let out = grover_rel(&["simulate", "--n", "1e4", "--v0", "0.05", "--trajectory", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let steps: usize = field(&stdout(&out), "steps_to_max").parse().unwrap();

    let file = TrajectoryFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let points = file.points::<f64>().unwrap();
    assert_eq!(points.len(), steps + 2);
    assert!((points[0].k2_fraction - 1e-4).abs() < 1e-15);
    for (k, p) in points.iter().enumerate() {
        assert_eq!(p.step, k);
        assert!((p.k1_fraction + p.k2_fraction - 1.0).abs() <= 1e-12);
        assert!(p.energy_drift_cumulative.abs() <= 1e-12);
    }
    assert!(points[..=steps].windows(2).all(|w| w[1].k2_fraction > w[0].k2_fraction));
}

#[test]
fn extended_trajectory_keeps_its_digits() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.json");
    let args = ["simulate", "--n", "1000", "--one-minus-v0", "2e-6", "--precision", "extended", "--trajectory"];
    let out = grover_rel(&[&args[..], &[path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    let file = TrajectoryFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.precision, "extended");
    let points = file.points::<Extended>().unwrap();
    let sum = points[1].k1_fraction + points[1].k2_fraction - Extended::ONE;
    assert!(sum.abs().to_f64() <= 1e-26);
}

const HEADER: &str = "N,v0,steps_to_max,max_fraction,classical_steps,asymptote,v0_ss,M_b,termination,big_ball_reversed";

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn sweep_matches_the_classical_count_at_low_speed() {
    let out = grover_rel(&["sweep", "--n-list", "100,400", "--v0-list", "0.000001", "--classical"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), HEADER);
    let rows = rows(&text);
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r.len(), 10);
        assert_eq!(r[2], r[4]);
    }
}

#[test]
fn sweep_without_baseline_leaves_the_column_empty() {
    let out = grover_rel(&["sweep", "--n-list", "10", "--v0-list", "0.1,0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[4].is_empty()));
    assert_eq!(rows[0][1], "1.0000000000000001e-1");
    assert_eq!(rows[0][5], "2.4836470664490253e+0");
}

#[test]
fn sweep_extended_uses_34_digits() {
    let out = grover_rel(&["sweep", "--n-list", "1000", "--one-minus-v0-list", "2e-6", "--precision", "extended"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&stdout(&out));
    let mantissa = rows[0][0].split('e').next().unwrap();
    assert_eq!(mantissa.len(), 35);
    assert_eq!(rows[0][0], "1.000000000000000000000000000000000e+3");
    assert_eq!(rows[0][2], "1");
}

#[test]
fn sweep_reports_incomplete_runs() {
    let out = grover_rel(&["sweep", "--n-list", "1e4", "--v0-list", "0.001", "--max-iter", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(rows(&stdout(&out))[0][8], "iteration_limit");
}

#[test]
fn sweep_json() {
    let out = grover_rel(&["sweep", "--n-list", "100,1000", "--v0-list", "0.01,0.8", "--format", "json", "--classical"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = json["records"].as_array().unwrap();
    assert_eq!(records.len(), 4);
    assert_eq!(records[3]["steps_to_max"], 4);
    assert_eq!(records[0]["classical_steps"], 7);
}

#[test]
fn sweep_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.csv");
    let out = grover_rel(&["sweep", "--n-list", "10", "--v0-list", "0.1", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(grover_rel(&["sweep", "--n-list", "1,10", "--v0-list", "0.1"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["sweep", "--n-list", "10", "--v0-list", "0.1,0.1"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["sweep", "--n-list", "10", "--v0-list", "1.5"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["sweep", "--n-list", "10"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["sweep", "--n-list", "10", "--v0-list", "0.1", "--jobs", "0"]).status.code(), Some(1));
}

fn sweep_to(path: &Path, jobs: &str) -> Vec<u8> {
    let out = grover_rel(&[
        "sweep", "--n-list", "1e2:1e5:7-log", "--v0-list", "0.001,0.05,0.3,0.8", "--classical", "--jobs", jobs,
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    std::fs::read(path).unwrap()
}

#[test]
fn sweep_output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = sweep_to(&dir.path().join("a.csv"), "1");
    let b = sweep_to(&dir.path().join("b.csv"), "2");
    let c = sweep_to(&dir.path().join("c.csv"), "8");
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.iter().filter(|&&x| x == b'\n').count(), 1 + 7 * 4);
}

#[test]
fn jobs_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_grover-rel"))
        .args(["sweep", "--n-list", "10,100", "--v0-list", "0.3", "--out", path.to_str().unwrap()])
        .env("GROVER_REL_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path).unwrap().starts_with(HEADER));
}

#[test]
fn predict_for_n() {
    let out = grover_rel(&["predict", "--n", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let asymptote: f64 = field(&text, "asymptote").parse().unwrap();
    assert!((asymptote - 78.539_816_339_744_83).abs() < 1e-12);
    let one_minus: f64 = field(&text, "one_minus_v0_ss").parse().unwrap();
    assert!((one_minus - 2e-8).abs() < 1e-23);
}

#[test]
fn predict_for_v0_as_json() {
    let out = grover_rel(&["predict", "--v0", "0.01", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m_b: f64 = json["M_b"].to_string().parse().unwrap();
    assert!((m_b - 13_333.333_333_333_334).abs() < 1e-9);
    assert!(json.get("asymptote").is_none());
}

#[test]
fn predict_needs_an_input() {
    assert_eq!(grover_rel(&["predict"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["predict", "--n", "1"]).status.code(), Some(1));
    assert_eq!(grover_rel(&["predict", "--v0", "1.2"]).status.code(), Some(1));
}
