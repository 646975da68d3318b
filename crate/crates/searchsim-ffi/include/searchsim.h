/* C interface for the searchsim target-search simulation toolkit. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call in this interface.
typedef enum SsStatus {
  // The call succeeded and all out-parameters are valid.
  SS_STATUS_OK = 0,
  // A required pointer argument was null.
  SS_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  SS_STATUS_INVALID_UTF8 = 2,
  // The scenario file or TOML text was rejected; see the error message.
  SS_STATUS_INVALID_SCENARIO = 3,
  // A numeric argument lies outside its valid domain.
  SS_STATUS_INVALID_ARGUMENT = 4,
  // A caller-supplied buffer does not match the required length.
  SS_STATUS_WRONG_BUFFER_SIZE = 5,
  // An internal panic was caught at the language boundary.
  SS_STATUS_PANIC = 6,
} SsStatus;

// Search strategy selector.
typedef enum SsPlannerKind {
  // Boustrophedon sweep over the grid, ignoring the belief.
  SS_PLANNER_KIND_ZIGZAG = 0,
  // Repeatedly visits the current most probable cell.
  SS_PLANNER_KIND_NAIVE = 1,
  // Receding-horizon planner driven by windowed belief aggregation.
  SS_PLANNER_KIND_WINDOWING = 2,
} SsPlannerKind;

// Opaque scenario handle: a parsed configuration plus any overrides applied
// through the `ss_scenario_set_*` calls. Overrides are validated when the
// scenario is built, i.e. by the first call that needs the full scenario.
typedef struct SsScenario SsScenario;

// Aggregate Monte Carlo statistics. The planner label is omitted — the
// caller chose it when configuring the scenario.
typedef struct SsRunStats {
  // Trials executed.
  uint64_t n_trials;
  // Trials that found the target.
  uint64_t detected;
  // Trials stopped by the step cap.
  uint64_t censored;
  // Trials aborted by a planner failure.
  uint64_t failed;
  // detected / n_trials.
  double detection_rate;
  // Mean detection time over detected trials, in time steps.
  double mean_time_steps;
  // Sample standard deviation of the detection time.
  double std_time_steps;
  // Standard error of the detection-time mean.
  double stderr_time_steps;
  // False when fewer than two detections exist; the std and stderr fields
  // then read 0 by convention.
  bool stderr_defined;
  // Mean detection time over detected trials, in seconds.
  double mean_time_seconds;
  // Mean propulsion energy over detected trials, joules.
  double mean_energy;
  // Sample standard deviation of the energy.
  double std_energy;
  // Mean path length over detected trials, meters.
  double mean_path_length;
  // Mean false alarms per detected trial.
  double mean_false_alarms;
} SsRunStats;

// Rotary-wing power-model coefficients; see `ss_power_params_default` for
// the reference values.
typedef struct SsPowerParams {
  // Blade profile power in hover, watts.
  double blade_profile_power;
  // Induced power in hover, watts.
  double induced_power;
  // Rotor blade tip speed, m/s.
  double tip_speed;
  // Mean rotor induced velocity in hover, m/s.
  double hover_induced_velocity;
  // Fuselage drag ratio, dimensionless.
  double fuselage_drag_ratio;
  // Air density, kg/m^3.
  double air_density;
  // Rotor disc area, m^2.
  double rotor_disc_area;
} SsPowerParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the toolkit, as a static nul-terminated string.
const char *ss_version(void);

// Message describing the most recent failure on the calling thread, empty
// when nothing has failed yet. The pointer stays valid until the next
// failing call on the same thread.
const char *ss_last_error_message(void);

// Parse a scenario from a TOML file and store a new handle in `out`.
enum SsStatus ss_scenario_load(const char *path, struct SsScenario **out);

// Parse a scenario from TOML text and store a new handle in `out`.
enum SsStatus ss_scenario_from_toml(const char *text, struct SsScenario **out);

// Release a scenario handle. Null is ignored.
void ss_scenario_free(struct SsScenario *scenario);

// Override the number of Monte Carlo trials.
enum SsStatus ss_scenario_set_trials(struct SsScenario *scenario, uint64_t n_trials);

// Override the base seed; trial `k` derives its stream from `seed + k`.
enum SsStatus ss_scenario_set_base_seed(struct SsScenario *scenario, uint64_t seed);

// Override which planner the simulation runs.
enum SsStatus ss_scenario_set_planner(struct SsScenario *scenario, enum SsPlannerKind kind);

// Override the windowing planner's window size.
enum SsStatus ss_scenario_set_window(struct SsScenario *scenario, size_t window);

// Number of grid cells the scenario's area decomposes into.
enum SsStatus ss_scenario_cell_count(const struct SsScenario *scenario, size_t *out);

// Copy the initial probability map, row-major from the bottom-left cell,
// into `buf`. `len` must equal the cell count exactly.
enum SsStatus ss_scenario_probabilities(const struct SsScenario *scenario, double *buf, size_t len);

// Run the configured Monte Carlo experiment and fill `out` with aggregate
// statistics.
enum SsStatus ss_run(const struct SsScenario *scenario, struct SsRunStats *out);

// Ground footprint (width, length) in meters imaged by a downward camera at
// `altitude` with the given full field-of-view angles in radians.
enum SsStatus ss_footprint(double altitude,
                           double vertical_angle,
                           double horizontal_angle,
                           double *out_width,
                           double *out_length);

// Fill `out` with the reference rotary-wing power coefficients.
enum SsStatus ss_power_params_default(struct SsPowerParams *out);

// Propulsion power in watts at forward speed `speed` m/s. At zero speed
// this equals the hover power exactly.
enum SsStatus ss_propulsion_power(double speed, const struct SsPowerParams *params, double *out);

// Expected number of observations until detection for the probability-order
// search over `probs` (sorted non-increasing, summing to 1) with the given
// missed-detection rate.
enum SsStatus ss_expected_time(const double *probs,
                               size_t len,
                               double missed_detection,
                               double *out);

// Expected number of time steps until detection, charging each false alarm
// `false_alarm_delay` extra steps of inspection.
enum SsStatus ss_expected_time_with_false_alarms(const double *probs,
                                                 size_t len,
                                                 double missed_detection,
                                                 double false_alarm,
                                                 uint32_t false_alarm_delay,
                                                 double *out);

// Upper bound on the expected detection time over all sorted beliefs on
// `cells` cells; the uniform belief attains it.
enum SsStatus ss_worst_case_upper_bound(size_t cells, double missed_detection, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
