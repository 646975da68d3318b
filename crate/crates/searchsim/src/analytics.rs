//! Closed-form expected detection times for the sorted-belief search process.
//!
//! The process visits cells cyclically in non-increasing probability order at
//! one time step per visit, with no belief updates between rounds. Its mean
//! detection time has a closed form, which serves as an oracle for the Monte
//! Carlo engine; a variant adds the expected ground-check delays caused by
//! false alarms.

use crate::error::{Error, Result};
use crate::probmap::kahan_sum;

/// The sorted-belief search process: `probs` non-increasing and summing to
/// one, visited cyclically until the target cell produces a detection.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedScenario {
    probs: Vec<f64>,
    missed_detection: f64,
    false_alarm: f64,
    false_alarm_delay: u32,
}

impl SimplifiedScenario {
    pub fn new(
        probs: Vec<f64>,
        missed_detection: f64,
        false_alarm: f64,
        false_alarm_delay: u32,
    ) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidScenario("at least one cell required".into()));
        }
        if probs.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidScenario(
                "cell probabilities must be sorted non-increasing".into(),
            ));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidScenario(
                "cell probabilities must lie in [0, 1]".into(),
            ));
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidScenario(format!(
                "cell probabilities must sum to 1, got {total}"
            )));
        }
        for (name, p) in [
            ("missed_detection", missed_detection),
            ("false_alarm", false_alarm),
        ] {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidScenario(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(Self {
            probs,
            missed_detection,
            false_alarm,
            false_alarm_delay,
        })
    }

    /// Uniform process over `m` cells.
    pub fn uniform(m: usize, missed_detection: f64, false_alarm: f64, delay: u32) -> Result<Self> {
        Self::new(
            vec![1.0 / m as f64; m],
            missed_detection,
            false_alarm,
            delay,
        )
    }

    pub fn cell_count(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn missed_detection(&self) -> f64 {
        self.missed_detection
    }

    pub fn false_alarm(&self) -> f64 {
        self.false_alarm
    }

    pub fn false_alarm_delay(&self) -> u32 {
        self.false_alarm_delay
    }

    /// Expected 1-based visit position of the target within one round:
    /// `E[I] = Σ i·p_i`.
    pub fn expected_index(&self) -> f64 {
        kahan_sum(
            self.probs
                .iter()
                .enumerate()
                .map(|(i, &p)| (i + 1) as f64 * p),
        )
    }

    /// Mean detection time without false alarms:
    /// `M·(1/(1 − e_d) − 1) + E[I]`.
    pub fn expected_time(&self) -> Result<f64> {
        if self.false_alarm != 0.0 {
            return Err(Error::InvalidScenario(
                "expected_time requires a zero false-alarm rate; use \
                 expected_time_with_false_alarms"
                    .into(),
            ));
        }
        let (m, extra_rounds) = self.round_terms()?;
        Ok(extra_rounds * m + self.expected_index())
    }

    /// Mean detection time including the expected ground-check delays:
    /// every cell visited without holding the target risks one false alarm
    /// costing `delay` steps, so
    /// `E[T] = ((E[Y]−1)·(M−1) + E[I] − 1)·delay·e_f + (E[Y]−1)·M + E[I]`
    /// with `E[Y] = 1/(1 − e_d)` the mean number of rounds.
    pub fn expected_time_with_false_alarms(&self) -> Result<f64> {
        let (m, extra_rounds) = self.round_terms()?;
        let expected_index = self.expected_index();
        let empty_visits = extra_rounds * (m - 1.0) + expected_index - 1.0;
        let delay = f64::from(self.false_alarm_delay) * self.false_alarm;
        Ok(empty_visits * delay + extra_rounds * m + expected_index)
    }

    /// `(M, E[Y] − 1)`, erroring when the sensor never detects.
    fn round_terms(&self) -> Result<(f64, f64)> {
        if self.missed_detection >= 1.0 {
            return Err(Error::DivergentExpectation(
                "a sensor that always misses never terminates the search".into(),
            ));
        }
        let m = self.probs.len() as f64;
        let extra_rounds = 1.0 / (1.0 - self.missed_detection) - 1.0;
        Ok((m, extra_rounds))
    }
}

/// Upper bound on the mean detection time over every sorted belief:
/// `M·(1+e_d) / (2·(1−e_d)) + 1/2`, attained by the uniform belief.
pub fn worst_case_upper_bound(m: usize, missed_detection: f64) -> Result<f64> {
    if missed_detection >= 1.0 {
        return Err(Error::DivergentExpectation(
            "a sensor that always misses never terminates the search".into(),
        ));
    }
    let m = m as f64;
    Ok(m * (1.0 + missed_detection) / (2.0 * (1.0 - missed_detection)) + 0.5)
}

/// First-detection distribution derived from per-step conditional
/// non-detection probabilities `q_t`: `f_t = (1 − q_t)·Π_{j<t} q_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstDetectionPmf {
    q: Vec<f64>,
    f: Vec<f64>,
}

impl FirstDetectionPmf {
    /// Build the pmf from the first `horizon` conditional probabilities
    /// (fewer when `q` is shorter).
    pub fn from_conditional_non_detection(q: &[f64], horizon: usize) -> Result<Self> {
        if q.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::InvalidScenario(
                "conditional non-detection probabilities must lie in [0, 1]".into(),
            ));
        }
        let len = horizon.min(q.len());
        let mut survival = 1.0;
        let mut f = Vec::with_capacity(len);
        for &qt in &q[..len] {
            f.push((1.0 - qt) * survival);
            survival *= qt;
        }
        Ok(Self {
            q: q[..len].to_vec(),
            f,
        })
    }

    pub fn horizon(&self) -> usize {
        self.f.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.f
    }

    pub fn conditional_non_detection(&self) -> &[f64] {
        &self.q
    }

    /// Truncated mean `Σ t·f_t` together with the probability mass beyond
    /// the horizon, so callers can bound the truncation error themselves.
    pub fn expected_time(&self) -> (f64, f64) {
        let value = kahan_sum(
            self.f
                .iter()
                .enumerate()
                .map(|(i, &f)| (i + 1) as f64 * f),
        );
        let tail_mass = 1.0 - kahan_sum(self.f.iter().copied());
        (value, tail_mass)
    }
}
