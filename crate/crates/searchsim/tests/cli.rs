//! End-to-end checks of the command-line interface: each subcommand against
//! the shipped scenario files, plus override precedence, determinism, and
//! failure exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_searchsim"))
}

fn scenario(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr),
    );
    String::from_utf8(output.stdout.clone()).expect("reports are UTF-8")
}

fn temp_file(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("searchsim-cli-{}-{name}", std::process::id()))
}

#[test]
fn simulate_emits_a_stats_table() {
    let out = stdout_of(&run(&[
        "simulate",
        &scenario("simplified.toml"),
        "--trials",
        "2000",
    ]));
    assert!(out.contains("planner"), "missing header: {out}");
    assert!(out.contains("naive"), "missing planner row: {out}");
}

#[test]
fn simulate_csv_matches_the_closed_form_ballpark() {
    let out = stdout_of(&run(&[
        "simulate",
        &scenario("simplified.toml"),
        "--csv",
        "--trials",
        "20000",
    ]));
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().expect("header row").split(',').collect();
    let row: Vec<&str> = lines.next().expect("stats row").split(',').collect();
    let col = |name: &str| {
        let i = header
            .iter()
            .position(|h| *h == name)
            .unwrap_or_else(|| panic!("missing column {name}: {header:?}"));
        row[i]
    };
    assert_eq!(col("planner"), "naive");
    assert_eq!(col("n_trials"), "20000");
    let mean: f64 = col("mean_time_steps").parse().expect("numeric mean");
    // 16 cells at 30% missed detection: the sorted-search closed form gives
    // 16·(1/0.7 − 1) + 8.5 ≈ 15.357; 20k trials put the mean within ±0.5.
    assert!(
        (mean - 15.357).abs() < 0.5,
        "simplified-mode mean {mean} is far from 15.357",
    );
}

#[test]
fn identical_seeds_give_identical_reports() {
    let args = [
        "simulate",
        &scenario("uniform.toml"),
        "--csv",
        "--trials",
        "500",
        "--seed",
        "42",
    ];
    assert_eq!(stdout_of(&run(&args)), stdout_of(&run(&args)));
}

#[test]
fn compare_lists_every_planner_with_baseline_ratio() {
    let out = stdout_of(&run(&[
        "compare",
        &scenario("naive_demo.toml"),
        "--csv",
        "--trials",
        "300",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4, "header plus three planners: {out}");
    let header: Vec<&str> = lines[0].split(',').collect();
    let ratio_col = header
        .iter()
        .position(|h| *h == "ratio_to_first")
        .expect("ratio column");
    let first: f64 = lines[1].split(',').nth(ratio_col).unwrap().parse().unwrap();
    assert_eq!(first, 1.0, "the first planner is its own baseline");
    for line in &lines[2..] {
        let ratio: f64 = line.split(',').nth(ratio_col).unwrap().parse().unwrap();
        assert!(ratio.is_finite() && ratio > 0.0);
    }
}

#[test]
fn analytic_reports_the_expected_time() {
    let out = stdout_of(&run(&["analytic", &scenario("simplified.toml"), "--csv"]));
    let row = out
        .lines()
        .find(|l| l.starts_with("expected_time_steps,"))
        .expect("expected_time_steps row");
    let value: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    let closed_form = 16.0 * (1.0 / 0.7 - 1.0) + 8.5;
    assert!(
        (value - closed_form).abs() < 1e-9,
        "analytic expected_time {value} vs {closed_form}",
    );
}

#[test]
fn decompose_reports_grid_waypoints_and_map() {
    // camera altitude 50 m with quarter-pi half-angles footprints 100 m
    // squares, so the 600x600 m area decomposes into 6x6 cells
    let table = stdout_of(&run(&["decompose", &scenario("uniform.toml")]));
    assert!(table.contains('6'), "grid table should mention 6 cells/side: {table}");

    let waypoints = stdout_of(&run(&["decompose", &scenario("uniform.toml"), "--csv"]));
    assert_eq!(waypoints.lines().count(), 37, "header plus 36 waypoints");

    let map = stdout_of(&run(&["decompose", &scenario("uniform.toml"), "--map"]));
    let probs: Vec<f64> = map
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(probs.len(), 36);
    let total: f64 = probs.iter().sum();
    assert!((total - 1.0).abs() < 1e-9, "initial map total {total}");
    assert!(probs.iter().all(|&p| (p - 1.0 / 36.0).abs() < 1e-12));
}

#[test]
fn emit_path_walks_one_step_at_a_time() {
    let out_path = temp_file("trace.csv");
    let out = run(&[
        "emit-path",
        &scenario("uniform.toml"),
        "--steps",
        "12",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).expect("trace file written");
    std::fs::remove_file(&out_path).ok();
    let cells: Vec<(i64, i64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(cells.len(), 12);
    assert_eq!(cells[0], (0, 0), "the walk starts at the configured cell");
    for pair in cells.windows(2) {
        let dist = (pair[0].0 - pair[1].0).abs() + (pair[0].1 - pair[1].1).abs();
        assert_eq!(dist, 1, "consecutive visits must be grid neighbors: {pair:?}");
    }
}

#[test]
fn sweep_emits_one_parseable_row_per_window() {
    let out = stdout_of(&run(&[
        "sweep",
        &scenario("naive_demo.toml"),
        "--windows",
        "2,3",
        "--csv",
        "--trials",
        "300",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3, "header plus one row per window: {out}");
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let ratio: f64 = fields.last().unwrap().parse().expect("ratio parses");
        assert!(ratio.is_finite() && ratio > 0.0);
    }
}

#[test]
fn invalid_configs_exit_nonzero() {
    let missing = run(&["simulate", "/nonexistent/scenario.toml"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());

    let bad = temp_file("bad.toml");
    std::fs::write(
        &bad,
        "[area]\nwidth = 100.0\nheight = 100.0\n\n[cells]\nwidth = 20.0\nheight = 20.0\n\n\
         [sensor]\nmissed_detection = 1.5\nfalse_alarm = 0.0\nfalse_alarm_delay = 0\n\n\
         [planner]\nkind = \"zigzag\"\n\n[sim]\nn_trials = 10\nbase_seed = 1\nspeed = 5.0\n",
    )
    .unwrap();
    let out = run(&["simulate", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).ok();
    assert_eq!(out.status.code(), Some(2), "out-of-range sensor must be rejected");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("error"), "diagnostic goes to stderr: {stderr}");
}

#[test]
fn environment_overrides_trial_count() {
    let out = bin()
        .args(["simulate", &scenario("simplified.toml"), "--csv"])
        .env("SEARCHSIM_N_TRIALS", "50")
        .output()
        .unwrap();
    let text = stdout_of(&out);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == "n_trials").unwrap();
    assert_eq!(row[i], "50");

    // CLI flags outrank the environment.
    let out = bin()
        .args([
            "simulate",
            &scenario("simplified.toml"),
            "--csv",
            "--trials",
            "75",
        ])
        .env("SEARCHSIM_N_TRIALS", "50")
        .output()
        .unwrap();
    let text = stdout_of(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[i], "75");

    let out = bin()
        .args(["simulate", &scenario("simplified.toml")])
        .env("SEARCHSIM_N_TRIALS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "malformed override must fail loudly");
}
