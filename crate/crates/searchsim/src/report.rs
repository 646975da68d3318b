//! Plain-text tables and CSV emitters for simulation and analytic results.
//!
//! Formatting only: everything here turns already-computed values into
//! strings. CSV output uses bare numeric columns so downstream plotting
//! tools can ingest it without quoting rules.

use std::fmt::Write as _;

use crate::analytics::{worst_case_upper_bound, SimplifiedScenario};
use crate::grid::GridSpec;
use crate::probmap::ProbabilityMap;
use crate::sim::{RunStatistics, SweepRow};

/// Pretty comparison table. With two or more rows the last column reports
/// each planner's mean time relative to the first row's.
pub fn stats_table(stats: &[RunStatistics]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>8} {:>9} {:>9} {:>7} {:>12} {:>11} {:>12} {:>13} {:>8}",
        "planner",
        "trials",
        "detected",
        "censored",
        "failed",
        "mean_steps",
        "stderr",
        "mean_sec",
        "mean_energy",
        "ratio"
    );
    let baseline = stats.first().map(|s| s.mean_time_steps);
    for s in stats {
        let ratio = match baseline {
            Some(b) if stats.len() > 1 && b > 0.0 => {
                format!("{:.4}", s.mean_time_steps / b)
            }
            _ => "-".to_string(),
        };
        let stderr = if s.stderr_defined {
            format!("{:.4}", s.stderr_time_steps)
        } else {
            "undef(0)".to_string()
        };
        let _ = writeln!(
            out,
            "{:<10} {:>8} {:>9} {:>9} {:>7} {:>12.4} {:>11} {:>12.2} {:>13.1} {:>8}",
            s.planner,
            s.n_trials,
            s.detected,
            s.censored,
            s.failed,
            s.mean_time_steps,
            stderr,
            s.mean_time_seconds,
            s.mean_energy,
            ratio
        );
    }
    out
}

/// CSV twin of [`stats_table`]; one row per planner.
pub fn stats_csv(stats: &[RunStatistics]) -> String {
    let mut out = String::from(
        "planner,n_trials,detected,censored,failed,detection_rate,mean_time_steps,\
         std_time_steps,stderr_time_steps,stderr_defined,mean_time_seconds,mean_energy,\
         std_energy,mean_path_length,mean_false_alarms,ratio_to_first\n",
    );
    let baseline = stats.first().map(|s| s.mean_time_steps).unwrap_or(0.0);
    for s in stats {
        let ratio = if baseline > 0.0 {
            s.mean_time_steps / baseline
        } else {
            f64::NAN
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.planner,
            s.n_trials,
            s.detected,
            s.censored,
            s.failed,
            s.detection_rate,
            s.mean_time_steps,
            s.std_time_steps,
            s.stderr_time_steps,
            s.stderr_defined,
            s.mean_time_seconds,
            s.mean_energy,
            s.std_energy,
            s.mean_path_length,
            s.mean_false_alarms,
            ratio
        );
    }
    out
}

/// Cell probabilities as `row,col,p` — the heatmap input format.
pub fn map_csv(map: &ProbabilityMap) -> String {
    let grid = map.grid();
    let mut out = String::from("row,col,p\n");
    for cell in 0..grid.cell_count() {
        let (row, col) = grid.row_col(cell);
        let _ = writeln!(out, "{},{},{}", row, col, map.prob(cell));
    }
    out
}

/// A visited-cell trace as `t,row,col` (t starts at 1).
pub fn trace_csv(grid: &GridSpec, trace: &[usize]) -> String {
    let mut out = String::from("t,row,col\n");
    for (t, &cell) in trace.iter().enumerate() {
        let (row, col) = grid.row_col(cell);
        let _ = writeln!(out, "{},{},{}", t + 1, row, col);
    }
    out
}

/// Grid decomposition summary: geometry, counts, and strides.
pub fn grid_table(grid: &GridSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "area:      {} x {} m", grid.area_width(), grid.area_height());
    let _ = writeln!(out, "cell:      {} x {} m", grid.cell_width(), grid.cell_height());
    let _ = writeln!(out, "stride:    {} x {} m", grid.stride_x(), grid.stride_y());
    let _ = writeln!(out, "layout:    {} rows x {} cols = {} cells", grid.rows(), grid.cols(), grid.cell_count());
    out
}

/// Waypoints as `cell,row,col,x,y`.
pub fn waypoints_csv(grid: &GridSpec) -> String {
    let mut out = String::from("cell,row,col,x,y\n");
    for cell in 0..grid.cell_count() {
        let (row, col) = grid.row_col(cell);
        let [x, y] = grid.waypoint(cell);
        let _ = writeln!(out, "{},{},{},{},{}", cell, row, col, x, y);
    }
    out
}

/// Closed-form detection-time figures for a scenario's simplified analog.
/// The plain expected time exists only when the false-alarm rate is zero;
/// the false-alarm variant is printed whenever the rate or delay is set.
pub fn analytic_rows(s: &SimplifiedScenario) -> Vec<(&'static str, f64)> {
    let mut rows = vec![
        ("cells", s.cell_count() as f64),
        ("missed_detection", s.missed_detection()),
        ("false_alarm", s.false_alarm()),
        ("false_alarm_delay", f64::from(s.false_alarm_delay())),
        ("expected_target_index", s.expected_index()),
    ];
    if let Ok(t) = s.expected_time() {
        rows.push(("expected_time_steps", t));
    }
    if s.false_alarm() > 0.0 {
        if let Ok(t) = s.expected_time_with_false_alarms() {
            rows.push(("expected_time_steps_with_false_alarms", t));
        }
    }
    if let Ok(bound) = worst_case_upper_bound(s.cell_count(), s.missed_detection()) {
        rows.push(("worst_case_upper_bound_steps", bound));
    }
    rows
}

pub fn analytic_table(s: &SimplifiedScenario) -> String {
    let mut out = String::new();
    for (name, value) in analytic_rows(s) {
        let _ = writeln!(out, "{name:<40} {value:.6}");
    }
    out
}

pub fn analytic_csv(s: &SimplifiedScenario) -> String {
    let mut out = String::from("metric,value\n");
    for (name, value) in analytic_rows(s) {
        let _ = writeln!(out, "{name},{value}");
    }
    out
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>5} {:>5} {:>6} {:>7} {:>16} {:>13} {:>8}",
        "rows", "cols", "cells", "window", "windowing_steps", "zigzag_steps", "ratio"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>6} {:>7} {:>16.4} {:>13.4} {:>8.4}",
            r.rows, r.cols, r.cells, r.window, r.windowing_mean_steps, r.zigzag_mean_steps, r.ratio
        );
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("rows,cols,cells,window,windowing_mean_steps,zigzag_mean_steps,ratio\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.rows, r.cols, r.cells, r.window, r.windowing_mean_steps, r.zigzag_mean_steps, r.ratio
        );
    }
    out
}
