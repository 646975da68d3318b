//! Scenario files: the TOML schema, environment overrides, and validation.
//!
//! A scenario file declares everything one simulation run needs — area and
//! cell geometry, the target-location distribution, sensor error rates,
//! planner selection, power parameters, and trial controls. `load` + `build`
//! turn it into a validated [`Scenario`] holding the shared immutable inputs.
//!
//! Canonical schema (all lengths in meters, angles in radians):
//!
//! ```toml
//! [area]
//! width = 2000.0
//! height = 2000.0
//!
//! # Cell shape comes from exactly one of [camera] (footprint geometry)
//! # or [cells] (explicit cell dimensions).
//! [camera]
//! altitude = 100.0
//! vertical_angle = 0.9273
//! horizontal_angle = 0.9273
//!
//! # [cells]
//! # width = 100.0
//! # height = 100.0
//!
//! [grid]               # optional; sensor-footprint overlap fractions [0, 1)
//! overlap_x = 0.0
//! overlap_y = 0.0
//!
//! [distribution]       # optional; defaults to uniform
//! kind = "gaussian_mixture"   # uniform | gaussian_mixture | gaussian_uniform_mixture
//! uniform_weight = 0.0        # gaussian_uniform_mixture only
//!
//! [[distribution.component]]
//! weight = 0.6
//! mean = [500.0, 1500.0]
//! std = [200.0, 200.0]
//!
//! [sensor]
//! missed_detection = 0.3
//! false_alarm = 0.0
//! false_alarm_delay = 0       # steps per false alarm
//!
//! [planner]
//! kind = "windowing"          # zigzag | naive | windowing
//! window = 3                  # windowing only; W^2 must fit the grid
//! start_cell = 0              # optional, defaults to 0
//!
//! [power]              # optional; defaults describe a representative
//! # blade_profile_power = 79.86   # small multirotor
//! # ...
//!
//! [sim]
//! n_trials = 10000
//! base_seed = 42
//! speed = 10.0                # cruise speed, m/s
//! max_steps = 8000            # optional, defaults to 20 x cell count
//! mode = "grid"               # optional: grid | simplified
//! record_trace = false        # optional
//!
//! [corridor]           # optional; inclusive cell-index bounds used by
//! min_row = 0          # visit-histogram reports
//! max_row = 9
//! min_col = 7
//! max_col = 32
//! ```
//!
//! Environment overrides (applied after the file, before CLI flags):
//! `SEARCHSIM_N_TRIALS`, `SEARCHSIM_BASE_SEED`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analytics::SimplifiedScenario;
use crate::energy::PowerParams;
use crate::error::{Error, Result};
use crate::grid::{CameraSpec, GridSpec};
use crate::planner::PlannerKind;
use crate::probmap::{DistributionSpec, ProbabilityMap};
use crate::sensor::SensorModel;

/// Name of the environment variable overriding `[sim] n_trials`.
pub const ENV_N_TRIALS: &str = "SEARCHSIM_N_TRIALS";
/// Name of the environment variable overriding `[sim] base_seed`.
pub const ENV_BASE_SEED: &str = "SEARCHSIM_BASE_SEED";

/// Which dynamics the trial loop uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Full grid dynamics: one-step moves, Bayesian map updates.
    #[default]
    Grid,
    /// Teleporting probability-order search without map updates; admits the
    /// closed-form expected-time oracles.
    Simplified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AreaConfig {
    width: f64,
    height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellConfig {
    width: f64,
    height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct GridOptions {
    overlap_x: f64,
    overlap_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlannerConfig {
    kind: PlannerKind,
    #[serde(default = "default_window")]
    window: usize,
    #[serde(default)]
    start_cell: usize,
}

fn default_window() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimOptions {
    n_trials: u64,
    base_seed: u64,
    speed: f64,
    /// Trial cutoff in steps; defaults to 20 x cell count.
    max_steps: Option<u64>,
    #[serde(default)]
    mode: SimMode,
    #[serde(default)]
    record_trace: bool,
}

/// Inclusive cell-index rectangle named by a scenario for visit-histogram
/// reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorridorConfig {
    pub min_row: usize,
    pub max_row: usize,
    pub min_col: usize,
    pub max_col: usize,
}

impl CorridorConfig {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.min_row..=self.max_row).contains(&row)
            && (self.min_col..=self.max_col).contains(&col)
    }

    fn validate(&self, grid: &GridSpec) -> Result<()> {
        if self.min_row > self.max_row || self.min_col > self.max_col {
            return Err(Error::InvalidScenario(
                "corridor bounds are inverted".into(),
            ));
        }
        if self.max_row >= grid.rows() || self.max_col >= grid.cols() {
            return Err(Error::InvalidScenario(format!(
                "corridor extends past the {}x{} grid",
                grid.rows(),
                grid.cols()
            )));
        }
        Ok(())
    }
}

/// The scenario file as written, prior to validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    area: AreaConfig,
    camera: Option<CameraSpec>,
    cells: Option<CellConfig>,
    #[serde(default)]
    grid: GridOptions,
    #[serde(default = "DistributionSpec::uniform")]
    distribution: DistributionSpec,
    sensor: SensorModel,
    planner: PlannerConfig,
    #[serde(default)]
    power: PowerParams,
    sim: SimOptions,
    corridor: Option<CorridorConfig>,
}

impl ScenarioConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidScenario(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Apply `SEARCHSIM_N_TRIALS` / `SEARCHSIM_BASE_SEED` when set. Malformed
    /// values are errors, not silent fallbacks.
    pub fn apply_env_overrides(&mut self) -> Result<()> {
        if let Some(v) = read_env_u64(ENV_N_TRIALS)? {
            self.sim.n_trials = v;
        }
        if let Some(v) = read_env_u64(ENV_BASE_SEED)? {
            self.sim.base_seed = v;
        }
        Ok(())
    }

    pub fn set_n_trials(&mut self, n: u64) {
        self.sim.n_trials = n;
    }

    pub fn set_base_seed(&mut self, seed: u64) {
        self.sim.base_seed = seed;
    }

    pub fn set_planner(&mut self, kind: PlannerKind) {
        self.planner.kind = kind;
    }

    pub fn set_window(&mut self, window: usize) {
        self.planner.window = window;
    }

    /// Validate and assemble the shared immutable inputs.
    pub fn build(&self) -> Result<Scenario> {
        self.build_with_grid(None)
    }

    /// `build`, but with the cell layout replaced by an explicit
    /// `rows x cols` grid over the same area. Used by grid-size sweeps.
    pub fn build_with_grid(&self, cell_grid: Option<(usize, usize)>) -> Result<Scenario> {
        let grid = match (cell_grid, &self.camera, &self.cells) {
            (Some((rows, cols)), _, _) => {
                GridSpec::with_cell_grid(self.area.width, self.area.height, rows, cols)?
            }
            (None, Some(camera), None) => GridSpec::decompose(
                self.area.width,
                self.area.height,
                camera,
                self.grid.overlap_x,
                self.grid.overlap_y,
            )?,
            (None, None, Some(cells)) => GridSpec::from_cell_shape(
                self.area.width,
                self.area.height,
                cells.width,
                cells.height,
                self.grid.overlap_x,
                self.grid.overlap_y,
            )?,
            (None, Some(_), Some(_)) => {
                return Err(Error::InvalidScenario(
                    "declare either [camera] or [cells], not both".into(),
                ))
            }
            (None, None, None) => {
                return Err(Error::InvalidScenario(
                    "one of [camera] or [cells] is required".into(),
                ))
            }
        };
        let grid = Arc::new(grid);
        let initial_map = ProbabilityMap::build(grid.clone(), &self.distribution, 0)?;
        self.sensor.validate()?;
        self.power.validate()?;
        if self.sim.n_trials == 0 {
            return Err(Error::InvalidScenario("n_trials must be at least 1".into()));
        }
        if !self.sim.speed.is_finite() || self.sim.speed <= 0.0 {
            return Err(Error::InvalidScenario(format!(
                "speed must be strictly positive, got {}",
                self.sim.speed
            )));
        }
        let max_steps = match self.sim.max_steps {
            Some(0) => {
                return Err(Error::InvalidScenario("max_steps must be at least 1".into()))
            }
            Some(n) => n,
            None => 20 * grid.cell_count() as u64,
        };
        if self.planner.start_cell >= grid.cell_count() {
            return Err(Error::InvalidScenario(format!(
                "start_cell {} is outside the {}-cell grid",
                self.planner.start_cell,
                grid.cell_count()
            )));
        }
        if self.planner.kind == PlannerKind::Windowing {
            let w = self.planner.window;
            if w == 0 || w * w > grid.cell_count() {
                return Err(Error::InvalidScenario(format!(
                    "window {w} does not fit a {}-cell grid",
                    grid.cell_count()
                )));
            }
        }
        if let Some(corridor) = &self.corridor {
            corridor.validate(&grid)?;
        }
        Ok(Scenario {
            grid,
            initial_map,
            sensor: self.sensor,
            planner: self.planner.kind,
            window: self.planner.window,
            start_cell: self.planner.start_cell,
            power: self.power,
            n_trials: self.sim.n_trials,
            max_steps,
            base_seed: self.sim.base_seed,
            speed: self.sim.speed,
            mode: self.sim.mode,
            record_trace: self.sim.record_trace,
            corridor: self.corridor,
        })
    }
}

fn read_env_u64(name: &str) -> Result<Option<u64>> {
    match std::env::var(name) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::InvalidScenario(format!("{name} must be an integer, got '{raw}'"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(_)) => Err(Error::InvalidScenario(format!(
            "{name} holds non-unicode data"
        ))),
    }
}

/// Validated, fully assembled simulation inputs. Immutable and shareable
/// across trial workers.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub grid: Arc<GridSpec>,
    pub initial_map: ProbabilityMap,
    pub sensor: SensorModel,
    pub planner: PlannerKind,
    pub window: usize,
    pub start_cell: usize,
    pub power: PowerParams,
    pub n_trials: u64,
    pub max_steps: u64,
    pub base_seed: u64,
    pub speed: f64,
    pub mode: SimMode,
    pub record_trace: bool,
    pub corridor: Option<CorridorConfig>,
}

impl Scenario {
    /// Seconds one observation step takes at cruise speed: the inter-waypoint
    /// stride divided by speed. Converts step counts to wall-clock seconds.
    pub fn step_seconds(&self) -> f64 {
        self.grid.stride_x() / self.speed
    }

    /// A planner swap that keeps everything else fixed; used by compare mode.
    pub fn with_planner(&self, kind: PlannerKind) -> Self {
        Self {
            planner: kind,
            ..self.clone()
        }
    }

    /// The closed-form analog of this scenario: cells reordered by
    /// non-increasing initial probability.
    pub fn simplified(&self) -> Result<SimplifiedScenario> {
        let mut probs = self.initial_map.probs().to_vec();
        probs.sort_by(|a, b| b.total_cmp(a));
        SimplifiedScenario::new(
            probs,
            self.sensor.missed_detection,
            self.sensor.false_alarm,
            self.sensor.false_alarm_delay,
        )
    }
}
