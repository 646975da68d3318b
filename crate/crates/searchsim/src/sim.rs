//! Monte Carlo trial loop, statistics aggregation, and planner comparison.
//!
//! Trials are independent: trial `k` owns its belief map, planner state, and
//! a random stream seeded `base_seed + k`, so results are deterministic and
//! identical whether trials run sequentially or across worker threads. The
//! target cell is the first draw of every trial's stream, which gives all
//! planners the same target on trial `k` in compare mode (common random
//! numbers).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Scenario, ScenarioConfig, SimMode};
use crate::error::{Error, Result};
use crate::planner::{build_planner, PlannerKind};
use crate::probmap::kahan_sum;
use crate::sensor::{observe, resolve_false_alarm, update_no_detection};

/// Outcome of one simulated search.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// True when the trial ended on a true-positive detection.
    pub detected: bool,
    /// Observation steps taken plus all accumulated false-alarm penalties.
    pub time_steps: u64,
    /// Observation steps spent moving (every observation after the first).
    pub motion_steps: u64,
    /// False alarms raised (each one charged the ground-check delay).
    pub false_alarms: u64,
    /// Meters actually flown between waypoints.
    pub path_length: f64,
    /// Propulsion energy in joules: cruise power while moving plus hover
    /// power while holding for ground checks.
    pub energy: f64,
    /// Observed cells in order, when the scenario asks for traces.
    pub trace: Option<Vec<usize>>,
    /// Why the trial aborted, if the planner or the belief update failed.
    pub failure: Option<String>,
}

/// Run trial `k` of the scenario. Deterministic given `(scenario, trial)`.
pub fn run_trial(scenario: &Scenario, trial: u64) -> TrialResult {
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.base_seed.wrapping_add(trial));
    match scenario.mode {
        SimMode::Grid => run_grid_trial(scenario, &mut rng),
        SimMode::Simplified => run_simplified_trial(scenario, &mut rng),
    }
}

fn run_grid_trial(scenario: &Scenario, rng: &mut ChaCha8Rng) -> TrialResult {
    let target = scenario.initial_map.sample_target(rng);
    let step_seconds = scenario.step_seconds();
    let cruise_power = crate::energy::propulsion_power(scenario.speed, &scenario.power)
        .expect("scenario validation admits the cruise speed");
    let hover_power = scenario.power.hover_power();
    let delay = u64::from(scenario.sensor.false_alarm_delay);

    let mut belief = scenario.initial_map.clone();
    let mut planner = match build_planner(
        scenario.planner,
        scenario.window,
        &scenario.initial_map,
        scenario.start_cell,
    ) {
        Ok(p) => p,
        Err(e) => return aborted(0, 0, 0, 0.0, 0.0, None, e),
    };

    let mut trace = scenario.record_trace.then(Vec::new);
    let mut previous: Option<usize> = None;
    let mut motion_steps = 0u64;
    let mut path_length = 0.0f64;
    let mut false_alarms = 0u64;
    let mut energy = 0.0f64;

    for step in 1..=scenario.max_steps {
        let cell = match planner.next_cell(&belief) {
            Ok(c) => c,
            Err(e) => {
                return aborted(
                    step - 1 + delay * false_alarms,
                    motion_steps,
                    false_alarms,
                    path_length,
                    energy,
                    trace,
                    e,
                )
            }
        };
        if let Some(prev) = previous {
            motion_steps += 1;
            path_length += scenario.grid.waypoint_distance(prev, cell);
            energy += cruise_power * step_seconds;
        }
        previous = Some(cell);
        if let Some(t) = trace.as_mut() {
            t.push(cell);
        }

        let obs = observe(target, cell, &scenario.sensor, rng);
        if obs.detected {
            if obs.ground_truth_present {
                // True positive: the ground team confirms at no modeled cost.
                return TrialResult {
                    detected: true,
                    time_steps: step + delay * false_alarms,
                    motion_steps,
                    false_alarms,
                    path_length,
                    energy,
                    trace,
                    failure: None,
                };
            }
            // False positive: the UAV hovers while the ground team clears it.
            false_alarms += 1;
            energy += hover_power * delay as f64 * step_seconds;
            if let Err(e) = resolve_false_alarm(&mut belief, cell) {
                return aborted(
                    step + delay * false_alarms,
                    motion_steps,
                    false_alarms,
                    path_length,
                    energy,
                    trace,
                    e,
                );
            }
        } else if let Err(e) = update_no_detection(&mut belief, cell, &scenario.sensor) {
            return aborted(
                step + delay * false_alarms,
                motion_steps,
                false_alarms,
                path_length,
                energy,
                trace,
                e,
            );
        }
        planner.notify(&obs, &belief);
    }

    TrialResult {
        detected: false,
        time_steps: scenario.max_steps + delay * false_alarms,
        motion_steps,
        false_alarms,
        path_length,
        energy,
        trace,
        failure: None,
    }
}

/// Teleporting probability-order search without belief updates: the dynamics
/// behind the closed-form expected-time formulas. Cells are visited in
/// non-increasing initial-probability order, round after round.
fn run_simplified_trial(scenario: &Scenario, rng: &mut ChaCha8Rng) -> TrialResult {
    let simplified = match scenario.simplified() {
        Ok(s) => s,
        Err(e) => return aborted(0, 0, 0, 0.0, 0.0, None, e),
    };
    let probs = simplified.probs();
    let target = sample_index(probs, rng.random());
    let step_seconds = scenario.step_seconds();
    let cruise_power = crate::energy::propulsion_power(scenario.speed, &scenario.power)
        .expect("scenario validation admits the cruise speed");
    let hover_power = scenario.power.hover_power();
    let delay = u64::from(scenario.sensor.false_alarm_delay);

    let m = probs.len() as u64;
    let mut motion_steps = 0u64;
    let mut false_alarms = 0u64;
    let mut energy = 0.0f64;

    for step in 1..=scenario.max_steps {
        let cell = ((step - 1) % m) as usize;
        if step > 1 {
            motion_steps += 1;
            energy += cruise_power * step_seconds;
        }
        let obs = observe(target, cell, &scenario.sensor, rng);
        if obs.detected {
            if obs.ground_truth_present {
                return TrialResult {
                    detected: true,
                    time_steps: step + delay * false_alarms,
                    motion_steps,
                    false_alarms,
                    path_length: 0.0,
                    energy,
                    trace: None,
                    failure: None,
                };
            }
            false_alarms += 1;
            energy += hover_power * delay as f64 * step_seconds;
        }
    }

    TrialResult {
        detected: false,
        time_steps: scenario.max_steps + delay * false_alarms,
        motion_steps,
        false_alarms,
        path_length: 0.0,
        energy,
        trace: None,
        failure: None,
    }
}

fn aborted(
    time_steps: u64,
    motion_steps: u64,
    false_alarms: u64,
    path_length: f64,
    energy: f64,
    trace: Option<Vec<usize>>,
    error: Error,
) -> TrialResult {
    TrialResult {
        detected: false,
        time_steps,
        motion_steps,
        false_alarms,
        path_length,
        energy,
        trace,
        failure: Some(error.to_string()),
    }
}

/// Inverse-CDF draw over an explicit probability vector.
fn sample_index(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_massive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_massive = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    last_massive
}

/// Aggregate statistics over one planner's trials. Detection-time and energy
/// moments cover detected trials only; censored and failed trials are
/// counted, never folded into the means.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStatistics {
    pub planner: String,
    pub n_trials: u64,
    pub detected: u64,
    pub censored: u64,
    pub failed: u64,
    pub detection_rate: f64,
    pub mean_time_steps: f64,
    pub std_time_steps: f64,
    pub stderr_time_steps: f64,
    /// False when fewer than two detections exist; the stderr and std fields
    /// then read 0 by convention.
    pub stderr_defined: bool,
    pub mean_time_seconds: f64,
    pub mean_energy: f64,
    pub std_energy: f64,
    pub mean_path_length: f64,
    pub mean_false_alarms: f64,
}

impl RunStatistics {
    /// Fold trial results in trial-index order (deterministic regardless of
    /// how the trials were executed).
    pub fn from_trials(planner: &str, trials: &[TrialResult], step_seconds: f64) -> Self {
        let n_trials = trials.len() as u64;
        let detected_trials: Vec<&TrialResult> = trials.iter().filter(|t| t.detected).collect();
        let detected = detected_trials.len() as u64;
        let failed = trials.iter().filter(|t| t.failure.is_some()).count() as u64;
        let censored = n_trials - detected - failed;

        let mean = |f: &dyn Fn(&TrialResult) -> f64| -> f64 {
            if detected == 0 {
                return 0.0;
            }
            kahan_sum(detected_trials.iter().map(|t| f(t))) / detected as f64
        };
        let sample_std = |f: &dyn Fn(&TrialResult) -> f64, mean: f64| -> f64 {
            if detected < 2 {
                return 0.0;
            }
            let ss = kahan_sum(detected_trials.iter().map(|t| {
                let d = f(t) - mean;
                d * d
            }));
            (ss / (detected - 1) as f64).sqrt()
        };

        let time = |t: &TrialResult| t.time_steps as f64;
        let energy = |t: &TrialResult| t.energy;
        let mean_time_steps = mean(&time);
        let std_time_steps = sample_std(&time, mean_time_steps);
        let mean_energy = mean(&energy);
        let std_energy = sample_std(&energy, mean_energy);
        let stderr_defined = detected >= 2;
        let stderr_time_steps = if stderr_defined {
            std_time_steps / (detected as f64).sqrt()
        } else {
            0.0
        };

        Self {
            planner: planner.to_string(),
            n_trials,
            detected,
            censored,
            failed,
            detection_rate: if n_trials == 0 {
                0.0
            } else {
                detected as f64 / n_trials as f64
            },
            mean_time_steps,
            std_time_steps,
            stderr_time_steps,
            stderr_defined,
            mean_time_seconds: mean_time_steps * step_seconds,
            mean_energy,
            std_energy,
            mean_path_length: mean(&|t| t.path_length),
            mean_false_alarms: mean(&|t| t.false_alarms as f64),
        }
    }
}

/// All trial results for a scenario, in trial-index order. Trials run on the
/// rayon pool; the order-preserving collect keeps aggregation deterministic.
pub fn run_trials(scenario: &Scenario) -> Vec<TrialResult> {
    (0..scenario.n_trials)
        .into_par_iter()
        .map(|k| run_trial(scenario, k))
        .collect()
}

/// Monte Carlo run of the scenario's configured planner.
pub fn run_monte_carlo(scenario: &Scenario) -> RunStatistics {
    let trials = run_trials(scenario);
    RunStatistics::from_trials(
        scenario.planner.as_str(),
        &trials,
        scenario.step_seconds(),
    )
}

/// Monte Carlo runs of several planners on identical trial seeds. The target
/// draw is the first use of each trial's stream, so trial `k` hides the
/// target in the same cell for every planner.
pub fn compare_planners(scenario: &Scenario, planners: &[PlannerKind]) -> Result<Vec<RunStatistics>> {
    if planners.len() < 2 {
        return Err(Error::InvalidScenario(
            "compare mode needs at least two planners".into(),
        ));
    }
    if scenario.mode == SimMode::Simplified {
        return Err(Error::InvalidScenario(
            "compare mode needs grid dynamics".into(),
        ));
    }
    Ok(planners
        .iter()
        .map(|&kind| run_monte_carlo(&scenario.with_planner(kind)))
        .collect())
}

/// One row of the window/grid-size sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rows: usize,
    pub cols: usize,
    pub cells: usize,
    pub window: usize,
    pub windowing_mean_steps: f64,
    pub zigzag_mean_steps: f64,
    /// Windowing mean time over zigzag mean time; below 1 means the
    /// windowing planner finds the target faster.
    pub ratio: f64,
}

/// Sweep window sizes (and optionally grid layouts) on one scenario,
/// measuring the windowing planner against the zigzag baseline.
pub fn sweep(
    cfg: &ScenarioConfig,
    windows: &[usize],
    grids: &[(usize, usize)],
) -> Result<Vec<SweepRow>> {
    if windows.is_empty() {
        return Err(Error::InvalidScenario("sweep needs at least one window".into()));
    }
    let mut rows = Vec::new();
    let layouts: Vec<Option<(usize, usize)>> = if grids.is_empty() {
        vec![None]
    } else {
        grids.iter().copied().map(Some).collect()
    };
    for layout in layouts {
        let base = cfg.build_with_grid(layout)?;
        let zigzag = run_monte_carlo(&base.with_planner(PlannerKind::Zigzag));
        for &window in windows {
            let mut scenario = base.with_planner(PlannerKind::Windowing);
            scenario.window = window;
            if window == 0 || window * window > scenario.grid.cell_count() {
                return Err(Error::InvalidScenario(format!(
                    "window {window} does not fit a {}-cell grid",
                    scenario.grid.cell_count()
                )));
            }
            let windowing = run_monte_carlo(&scenario);
            rows.push(SweepRow {
                rows: scenario.grid.rows(),
                cols: scenario.grid.cols(),
                cells: scenario.grid.cell_count(),
                window,
                windowing_mean_steps: windowing.mean_time_steps,
                zigzag_mean_steps: zigzag.mean_time_steps,
                ratio: windowing.mean_time_steps / zigzag.mean_time_steps,
            });
        }
    }
    Ok(rows)
}

/// Deterministic forced-non-detection walk of the scenario's planner:
/// every observation reports nothing and the belief updates accordingly.
/// This is the trajectory a trial would follow while the sensor stays quiet,
/// independent of where the target is.
pub fn emit_trace(scenario: &Scenario, steps: u64) -> Result<Vec<usize>> {
    let mut belief = scenario.initial_map.clone();
    let mut planner = build_planner(
        scenario.planner,
        scenario.window,
        &scenario.initial_map,
        scenario.start_cell,
    )?;
    let mut trace = Vec::with_capacity(steps as usize);
    for _ in 0..steps {
        let cell = planner.next_cell(&belief)?;
        trace.push(cell);
        update_no_detection(&mut belief, cell, &scenario.sensor)?;
    }
    Ok(trace)
}

/// Fraction of a forced-non-detection walk spent inside the scenario's
/// corridor rectangle.
pub fn corridor_fraction(scenario: &Scenario, steps: u64) -> Result<f64> {
    let corridor = scenario.corridor.ok_or_else(|| {
        Error::InvalidScenario("the scenario declares no [corridor]".into())
    })?;
    let trace = emit_trace(scenario, steps)?;
    let inside = trace
        .iter()
        .filter(|&&cell| {
            let (row, col) = scenario.grid.row_col(cell);
            corridor.contains(row, col)
        })
        .count();
    Ok(inside as f64 / trace.len() as f64)
}
