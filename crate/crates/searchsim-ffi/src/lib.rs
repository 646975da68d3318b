//! C bindings for the simulation toolkit: opaque scenario handles, status
//! codes, and thread-local error messages.
//!
//! Every function returns an [`SsStatus`] and writes its out-parameters only
//! on success. After any failure, [`ss_last_error_message`] describes what
//! went wrong on the calling thread. Pointers passed in are never retained
//! past the call; handles returned by the `ss_scenario_*` constructors must
//! be released with [`ss_scenario_free`]. The generated header lives in
//! `include/searchsim.h`.

// The doc comment on each function states its pointer contract in terms a C
// reader sees in the generated header; separate `# Safety` sections would
// only duplicate those lines.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::AssertUnwindSafe;

use searchsim::analytics::{worst_case_upper_bound, SimplifiedScenario};
use searchsim::config::ScenarioConfig;
use searchsim::energy::{propulsion_power, PowerParams};
use searchsim::grid::{footprint, CameraSpec};
use searchsim::planner::PlannerKind;
use searchsim::sim::{run_monte_carlo, RunStatistics};

/// Result of every call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    /// The call succeeded and all out-parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The scenario file or TOML text was rejected; see the error message.
    InvalidScenario = 3,
    /// A numeric argument lies outside its valid domain.
    InvalidArgument = 4,
    /// A caller-supplied buffer does not match the required length.
    WrongBufferSize = 5,
    /// An internal panic was caught at the language boundary.
    Panic = 6,
}

/// Search strategy selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsPlannerKind {
    /// Boustrophedon sweep over the grid, ignoring the belief.
    Zigzag = 0,
    /// Repeatedly visits the current most probable cell.
    Naive = 1,
    /// Receding-horizon planner driven by windowed belief aggregation.
    Windowing = 2,
}

impl From<SsPlannerKind> for PlannerKind {
    fn from(kind: SsPlannerKind) -> Self {
        match kind {
            SsPlannerKind::Zigzag => PlannerKind::Zigzag,
            SsPlannerKind::Naive => PlannerKind::Naive,
            SsPlannerKind::Windowing => PlannerKind::Windowing,
        }
    }
}

/// Rotary-wing power-model coefficients; see `ss_power_params_default` for
/// the reference values.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsPowerParams {
    /// Blade profile power in hover, watts.
    pub blade_profile_power: f64,
    /// Induced power in hover, watts.
    pub induced_power: f64,
    /// Rotor blade tip speed, m/s.
    pub tip_speed: f64,
    /// Mean rotor induced velocity in hover, m/s.
    pub hover_induced_velocity: f64,
    /// Fuselage drag ratio, dimensionless.
    pub fuselage_drag_ratio: f64,
    /// Air density, kg/m^3.
    pub air_density: f64,
    /// Rotor disc area, m^2.
    pub rotor_disc_area: f64,
}

impl From<&SsPowerParams> for PowerParams {
    fn from(p: &SsPowerParams) -> Self {
        Self {
            blade_profile_power: p.blade_profile_power,
            induced_power: p.induced_power,
            tip_speed: p.tip_speed,
            hover_induced_velocity: p.hover_induced_velocity,
            fuselage_drag_ratio: p.fuselage_drag_ratio,
            air_density: p.air_density,
            rotor_disc_area: p.rotor_disc_area,
        }
    }
}

impl From<PowerParams> for SsPowerParams {
    fn from(p: PowerParams) -> Self {
        Self {
            blade_profile_power: p.blade_profile_power,
            induced_power: p.induced_power,
            tip_speed: p.tip_speed,
            hover_induced_velocity: p.hover_induced_velocity,
            fuselage_drag_ratio: p.fuselage_drag_ratio,
            air_density: p.air_density,
            rotor_disc_area: p.rotor_disc_area,
        }
    }
}

/// Aggregate Monte Carlo statistics. The planner label is omitted — the
/// caller chose it when configuring the scenario.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsRunStats {
    /// Trials executed.
    pub n_trials: u64,
    /// Trials that found the target.
    pub detected: u64,
    /// Trials stopped by the step cap.
    pub censored: u64,
    /// Trials aborted by a planner failure.
    pub failed: u64,
    /// detected / n_trials.
    pub detection_rate: f64,
    /// Mean detection time over detected trials, in time steps.
    pub mean_time_steps: f64,
    /// Sample standard deviation of the detection time.
    pub std_time_steps: f64,
    /// Standard error of the detection-time mean.
    pub stderr_time_steps: f64,
    /// False when fewer than two detections exist; the std and stderr fields
    /// then read 0 by convention.
    pub stderr_defined: bool,
    /// Mean detection time over detected trials, in seconds.
    pub mean_time_seconds: f64,
    /// Mean propulsion energy over detected trials, joules.
    pub mean_energy: f64,
    /// Sample standard deviation of the energy.
    pub std_energy: f64,
    /// Mean path length over detected trials, meters.
    pub mean_path_length: f64,
    /// Mean false alarms per detected trial.
    pub mean_false_alarms: f64,
}

impl From<&RunStatistics> for SsRunStats {
    fn from(s: &RunStatistics) -> Self {
        Self {
            n_trials: s.n_trials,
            detected: s.detected,
            censored: s.censored,
            failed: s.failed,
            detection_rate: s.detection_rate,
            mean_time_steps: s.mean_time_steps,
            std_time_steps: s.std_time_steps,
            stderr_time_steps: s.stderr_time_steps,
            stderr_defined: s.stderr_defined,
            mean_time_seconds: s.mean_time_seconds,
            mean_energy: s.mean_energy,
            std_energy: s.std_energy,
            mean_path_length: s.mean_path_length,
            mean_false_alarms: s.mean_false_alarms,
        }
    }
}

/// Opaque scenario handle: a parsed configuration plus any overrides applied
/// through the `ss_scenario_set_*` calls. Overrides are validated when the
/// scenario is built, i.e. by the first call that needs the full scenario.
pub struct SsScenario {
    cfg: ScenarioConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail<E: std::fmt::Display>(status: SsStatus, err: E) -> SsStatus {
    let text = err.to_string().replace('\0', "?");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).unwrap_or_default();
    });
    status
}

/// Unwinding across the C boundary is undefined; trap panics and report them
/// as a status instead.
fn guard(body: impl FnOnce() -> SsStatus) -> SsStatus {
    std::panic::catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| fail(SsStatus::Panic, "internal panic"))
}

unsafe fn utf8<'a>(ptr: *const c_char) -> Result<&'a str, SsStatus> {
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(SsStatus::InvalidUtf8, e))
}

/// Version of the toolkit, as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn ss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message describing the most recent failure on the calling thread, empty
/// when nothing has failed yet. The pointer stays valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse a scenario from a TOML file and store a new handle in `out`.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_load(
    path: *const c_char,
    out: *mut *mut SsScenario,
) -> SsStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return fail(SsStatus::NullArgument, "ss_scenario_load: null argument");
        }
        let path = match utf8(path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        match ScenarioConfig::load(path) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(SsScenario { cfg }));
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidScenario, e),
        }
    })
}

/// Parse a scenario from TOML text and store a new handle in `out`.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_from_toml(
    text: *const c_char,
    out: *mut *mut SsScenario,
) -> SsStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(SsStatus::NullArgument, "ss_scenario_from_toml: null argument");
        }
        let text = match utf8(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match ScenarioConfig::from_toml(text) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(SsScenario { cfg }));
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidScenario, e),
        }
    })
}

/// Release a scenario handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_free(scenario: *mut SsScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Override the number of Monte Carlo trials.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_set_trials(
    scenario: *mut SsScenario,
    n_trials: u64,
) -> SsStatus {
    guard(|| {
        let Some(handle) = scenario.as_mut() else {
            return fail(SsStatus::NullArgument, "ss_scenario_set_trials: null scenario");
        };
        handle.cfg.set_n_trials(n_trials);
        SsStatus::Ok
    })
}

/// Override the base seed; trial `k` derives its stream from `seed + k`.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_set_base_seed(
    scenario: *mut SsScenario,
    seed: u64,
) -> SsStatus {
    guard(|| {
        let Some(handle) = scenario.as_mut() else {
            return fail(SsStatus::NullArgument, "ss_scenario_set_base_seed: null scenario");
        };
        handle.cfg.set_base_seed(seed);
        SsStatus::Ok
    })
}

/// Override which planner the simulation runs.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_set_planner(
    scenario: *mut SsScenario,
    kind: SsPlannerKind,
) -> SsStatus {
    guard(|| {
        let Some(handle) = scenario.as_mut() else {
            return fail(SsStatus::NullArgument, "ss_scenario_set_planner: null scenario");
        };
        handle.cfg.set_planner(kind.into());
        SsStatus::Ok
    })
}

/// Override the windowing planner's window size.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_set_window(
    scenario: *mut SsScenario,
    window: usize,
) -> SsStatus {
    guard(|| {
        let Some(handle) = scenario.as_mut() else {
            return fail(SsStatus::NullArgument, "ss_scenario_set_window: null scenario");
        };
        handle.cfg.set_window(window);
        SsStatus::Ok
    })
}

/// Number of grid cells the scenario's area decomposes into.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_cell_count(
    scenario: *const SsScenario,
    out: *mut usize,
) -> SsStatus {
    guard(|| {
        let Some(handle) = scenario.as_ref() else {
            return fail(SsStatus::NullArgument, "ss_scenario_cell_count: null scenario");
        };
        if out.is_null() {
            return fail(SsStatus::NullArgument, "ss_scenario_cell_count: null out");
        }
        match handle.cfg.build() {
            Ok(s) => {
                *out = s.initial_map.len();
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidScenario, e),
        }
    })
}

/// Copy the initial probability map, row-major from the bottom-left cell,
/// into `buf`. `len` must equal the cell count exactly.
#[no_mangle]
pub unsafe extern "C" fn ss_scenario_probabilities(
    scenario: *const SsScenario,
    buf: *mut f64,
    len: usize,
) -> SsStatus {
    guard(|| {
        let Some(handle) = scenario.as_ref() else {
            return fail(SsStatus::NullArgument, "ss_scenario_probabilities: null scenario");
        };
        if buf.is_null() {
            return fail(SsStatus::NullArgument, "ss_scenario_probabilities: null buffer");
        }
        let scenario = match handle.cfg.build() {
            Ok(s) => s,
            Err(e) => return fail(SsStatus::InvalidScenario, e),
        };
        let probs = scenario.initial_map.probs();
        if len != probs.len() {
            return fail(
                SsStatus::WrongBufferSize,
                format!("buffer holds {len} values, the map has {}", probs.len()),
            );
        }
        std::ptr::copy_nonoverlapping(probs.as_ptr(), buf, len);
        SsStatus::Ok
    })
}

/// Run the configured Monte Carlo experiment and fill `out` with aggregate
/// statistics.
#[no_mangle]
pub unsafe extern "C" fn ss_run(scenario: *const SsScenario, out: *mut SsRunStats) -> SsStatus {
    guard(|| {
        let Some(handle) = scenario.as_ref() else {
            return fail(SsStatus::NullArgument, "ss_run: null scenario");
        };
        if out.is_null() {
            return fail(SsStatus::NullArgument, "ss_run: null out");
        }
        match handle.cfg.build() {
            Ok(s) => {
                *out = SsRunStats::from(&run_monte_carlo(&s));
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidScenario, e),
        }
    })
}

/// Ground footprint (width, length) in meters imaged by a downward camera at
/// `altitude` with the given full field-of-view angles in radians.
#[no_mangle]
pub unsafe extern "C" fn ss_footprint(
    altitude: f64,
    vertical_angle: f64,
    horizontal_angle: f64,
    out_width: *mut f64,
    out_length: *mut f64,
) -> SsStatus {
    guard(|| {
        if out_width.is_null() || out_length.is_null() {
            return fail(SsStatus::NullArgument, "ss_footprint: null out");
        }
        let camera = CameraSpec {
            altitude,
            vertical_angle,
            horizontal_angle,
        };
        match footprint(&camera) {
            Ok((w, l)) => {
                *out_width = w;
                *out_length = l;
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidArgument, e),
        }
    })
}

/// Fill `out` with the reference rotary-wing power coefficients.
#[no_mangle]
pub unsafe extern "C" fn ss_power_params_default(out: *mut SsPowerParams) -> SsStatus {
    guard(|| {
        if out.is_null() {
            return fail(SsStatus::NullArgument, "ss_power_params_default: null out");
        }
        *out = PowerParams::default().into();
        SsStatus::Ok
    })
}

/// Propulsion power in watts at forward speed `speed` m/s. At zero speed
/// this equals the hover power exactly.
#[no_mangle]
pub unsafe extern "C" fn ss_propulsion_power(
    speed: f64,
    params: *const SsPowerParams,
    out: *mut f64,
) -> SsStatus {
    guard(|| {
        let Some(params) = params.as_ref() else {
            return fail(SsStatus::NullArgument, "ss_propulsion_power: null params");
        };
        if out.is_null() {
            return fail(SsStatus::NullArgument, "ss_propulsion_power: null out");
        }
        match propulsion_power(speed, &params.into()) {
            Ok(p) => {
                *out = p;
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidArgument, e),
        }
    })
}

/// Expected number of observations until detection for the probability-order
/// search over `probs` (sorted non-increasing, summing to 1) with the given
/// missed-detection rate.
#[no_mangle]
pub unsafe extern "C" fn ss_expected_time(
    probs: *const f64,
    len: usize,
    missed_detection: f64,
    out: *mut f64,
) -> SsStatus {
    guard(|| {
        if probs.is_null() || out.is_null() {
            return fail(SsStatus::NullArgument, "ss_expected_time: null argument");
        }
        let probs = std::slice::from_raw_parts(probs, len);
        let result = SimplifiedScenario::new(probs.to_vec(), missed_detection, 0.0, 0)
            .and_then(|s| s.expected_time());
        match result {
            Ok(t) => {
                *out = t;
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidArgument, e),
        }
    })
}

/// Expected number of time steps until detection, charging each false alarm
/// `false_alarm_delay` extra steps of inspection.
#[no_mangle]
pub unsafe extern "C" fn ss_expected_time_with_false_alarms(
    probs: *const f64,
    len: usize,
    missed_detection: f64,
    false_alarm: f64,
    false_alarm_delay: u32,
    out: *mut f64,
) -> SsStatus {
    guard(|| {
        if probs.is_null() || out.is_null() {
            return fail(
                SsStatus::NullArgument,
                "ss_expected_time_with_false_alarms: null argument",
            );
        }
        let probs = std::slice::from_raw_parts(probs, len);
        let result =
            SimplifiedScenario::new(probs.to_vec(), missed_detection, false_alarm, false_alarm_delay)
                .and_then(|s| s.expected_time_with_false_alarms());
        match result {
            Ok(t) => {
                *out = t;
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidArgument, e),
        }
    })
}

/// Upper bound on the expected detection time over all sorted beliefs on
/// `cells` cells; the uniform belief attains it.
#[no_mangle]
pub unsafe extern "C" fn ss_worst_case_upper_bound(
    cells: usize,
    missed_detection: f64,
    out: *mut f64,
) -> SsStatus {
    guard(|| {
        if out.is_null() {
            return fail(SsStatus::NullArgument, "ss_worst_case_upper_bound: null out");
        }
        match worst_case_upper_bound(cells, missed_detection) {
            Ok(b) => {
                *out = b;
                SsStatus::Ok
            }
            Err(e) => fail(SsStatus::InvalidArgument, e),
        }
    })
}
