//! Imperfect detection model and the exact Bayesian belief update.
//!
//! Scanning a cell yields a binary report. With the target present the
//! sensor stays silent with probability `missed_detection`; with the target
//! absent it raises a false alarm with probability `false_alarm`. Every
//! report conditions the probability map: a non-detection reweights the map
//! in closed form, and a ground-check that disproves an alarm zeroes the
//! checked cell.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probmap::ProbabilityMap;

/// Detection error rates and the false-alarm ground-check delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorModel {
    /// Probability of reporting nothing when the target is in the scanned
    /// cell, in [0, 1).
    pub missed_detection: f64,
    /// Probability of reporting a target when the scanned cell is empty,
    /// in [0, 1).
    pub false_alarm: f64,
    /// Time steps a ground team spends disproving one false alarm.
    #[serde(default)]
    pub false_alarm_delay: u32,
}

impl SensorModel {
    pub fn new(missed_detection: f64, false_alarm: f64, false_alarm_delay: u32) -> Result<Self> {
        let sensor = Self {
            missed_detection,
            false_alarm,
            false_alarm_delay,
        };
        sensor.validate()?;
        Ok(sensor)
    }

    /// Sensor that never errs.
    pub fn perfect() -> Self {
        Self {
            missed_detection: 0.0,
            false_alarm: 0.0,
            false_alarm_delay: 0,
        }
    }

    /// Missed detection may reach 1 (a sensor that never reports, useful for
    /// exercising censoring); a certain false alarm would zero `b` on every
    /// empty cell, so that rate stays strictly below 1.
    pub fn validate(&self) -> Result<()> {
        if !self.missed_detection.is_finite() || !(0.0..=1.0).contains(&self.missed_detection) {
            return Err(Error::InvalidSensor(format!(
                "missed_detection must lie in [0, 1], got {}",
                self.missed_detection
            )));
        }
        if !self.false_alarm.is_finite() || !(0.0..1.0).contains(&self.false_alarm) {
            return Err(Error::InvalidSensor(format!(
                "false_alarm must lie in [0, 1), got {}",
                self.false_alarm
            )));
        }
        Ok(())
    }
}

/// One sensor report. `ground_truth_present` is simulator-side bookkeeping;
/// planners must only consume `cell` and `detected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    pub cell: usize,
    pub detected: bool,
    pub ground_truth_present: bool,
}

/// Draw one sensor report for a scan of `visited_cell`.
pub fn observe<R: Rng + ?Sized>(
    target_cell: usize,
    visited_cell: usize,
    sensor: &SensorModel,
    rng: &mut R,
) -> Observation {
    let present = target_cell == visited_cell;
    let detected = if present {
        !rng.random_bool(sensor.missed_detection)
    } else {
        rng.random_bool(sensor.false_alarm)
    };
    Observation {
        cell: visited_cell,
        detected,
        ground_truth_present: present,
    }
}

/// Prior probability that scanning a cell with presence probability `p`
/// yields no detection: `e_d·p + (1 − e_f)·(1 − p)`. This is also the
/// normalizer of the non-detection posterior.
pub fn no_detection_prob(p: f64, sensor: &SensorModel) -> Result<f64> {
    let b = sensor.missed_detection * p + (1.0 - sensor.false_alarm) * (1.0 - p);
    if b <= 0.0 {
        return Err(Error::DegeneratePosterior(format!(
            "a non-detection has zero prior probability (p = {p}, missed_detection = {}, \
             false_alarm = {})",
            sensor.missed_detection, sensor.false_alarm
        )));
    }
    Ok(b)
}

/// Condition the map on a non-detection at `visited`, in place.
///
/// The visited cell shrinks by `e_d / b` and every other cell scales by
/// `(1 − e_f) / b`, where `b` is [`no_detection_prob`] of the visited cell.
/// The posterior sums to one algebraically; a final division by the
/// compensated total clears the few-ulp rounding residue so the simplex
/// invariant holds to 1e-12 over arbitrarily long update chains instead of
/// drifting a few ulps per step.
pub fn update_no_detection(
    map: &mut ProbabilityMap,
    visited: usize,
    sensor: &SensorModel,
) -> Result<()> {
    // e_d = 1 − e_f makes both scale factors exactly 1: the observation
    // carries no information. Return untouched (bit-identical) rather than
    // multiply every cell by a rounded 1.
    if sensor.missed_detection == 1.0 - sensor.false_alarm {
        return Ok(());
    }
    let p_visited = map.prob(visited);
    let b = no_detection_prob(p_visited, sensor).map_err(|_| {
        Error::DegeneratePosterior(format!(
            "non-detection at cell {visited} contradicts its presence probability {p_visited}"
        ))
    })?;
    let keep = (1.0 - sensor.false_alarm) / b;
    let shrink = sensor.missed_detection / b;
    for p in map.probs_mut().iter_mut() {
        *p *= keep;
    }
    map.probs_mut()[visited] = p_visited * shrink;
    let total = map.total();
    for p in map.probs_mut().iter_mut() {
        *p /= total;
    }
    debug_assert!(
        (map.total() - 1.0).abs() < 1e-12,
        "non-detection update drifted off the simplex: total = {}",
        map.total()
    );
    Ok(())
}

/// Condition the map on a ground check that found `visited` empty, in place:
/// the cell's mass drops to zero and the remainder renormalizes.
///
/// A zero-mass cell is a no-op; a unit-mass cell is a contradiction.
pub fn resolve_false_alarm(map: &mut ProbabilityMap, visited: usize) -> Result<()> {
    let held = map.prob(visited);
    if held == 0.0 {
        return Ok(());
    }
    map.probs_mut()[visited] = 0.0;
    let rest = map.total();
    if rest <= 0.0 {
        map.probs_mut()[visited] = held;
        return Err(Error::DegeneratePosterior(format!(
            "cell {visited} held the entire probability mass; confirming it empty leaves no \
             consistent belief"
        )));
    }
    for p in map.probs_mut().iter_mut() {
        *p /= rest;
    }
    Ok(())
}
