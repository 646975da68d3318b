//! Rotary-wing propulsion power and trajectory energy accounting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rotary-wing power-model parameters. Defaults (see the scenario config)
/// describe a representative small multirotor; they are configuration, not
/// measured ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerParams {
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

impl Default for PowerParams {
    fn default() -> Self {
        Self {
            blade_profile_power: 79.86,
            induced_power: 88.63,
            tip_speed: 120.0,
            hover_induced_velocity: 4.03,
            fuselage_drag_ratio: 0.6,
            air_density: 1.225,
            rotor_disc_area: 0.503,
        }
    }
}

impl PowerParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("blade_profile_power", self.blade_profile_power),
            ("induced_power", self.induced_power),
            ("tip_speed", self.tip_speed),
            ("hover_induced_velocity", self.hover_induced_velocity),
            ("fuselage_drag_ratio", self.fuselage_drag_ratio),
            ("air_density", self.air_density),
            ("rotor_disc_area", self.rotor_disc_area),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidScenario(format!(
                    "power parameter {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Hover power: exactly blade profile plus induced power.
    pub fn hover_power(&self) -> f64 {
        self.blade_profile_power + self.induced_power
    }
}

/// Level-flight propulsion power at speed `v`:
/// blade profile term `P0·(1 + 3v²/U_tip²)`, induced term
/// `Pi·(√(1 + v⁴/(4v0⁴)) − v²/(2v0²))^{1/2}`, and parasite term
/// `½·d0·ρ·A·v³`.
pub fn propulsion_power(v: f64, params: &PowerParams) -> Result<f64> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::InvalidSpeed(v));
    }
    params.validate()?;
    let v2 = v * v;
    let blade = params.blade_profile_power * (1.0 + 3.0 * v2 / (params.tip_speed * params.tip_speed));
    // √(1+x²) − x rewritten as 1/(√(1+x²) + x): algebraically identical but
    // immune to cancellation at high speed, and exactly 1 at v = 0.
    let x = v2 / (2.0 * params.hover_induced_velocity * params.hover_induced_velocity);
    let induced = params.induced_power * (1.0 / ((1.0 + x * x).sqrt() + x)).sqrt();
    let parasite =
        0.5 * params.fuselage_drag_ratio * params.air_density * params.rotor_disc_area * v2 * v;
    Ok(blade + induced + parasite)
}

/// A constant-speed flight segment (or a hover) to be priced in joules.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    waypoints: Vec<[f64; 2]>,
    speed: f64,
    duration: f64,
}

impl Trajectory {
    /// Constant-speed flight through `waypoints`; duration follows from the
    /// path length.
    pub fn cruise(waypoints: Vec<[f64; 2]>, speed: f64) -> Result<Self> {
        let length = path_length(&waypoints);
        if !speed.is_finite() || speed < 0.0 {
            return Err(Error::InvalidSpeed(speed));
        }
        if speed == 0.0 && length > 0.0 {
            return Err(Error::InvalidTrajectory(
                "zero speed over a nonzero path never completes".into(),
            ));
        }
        let duration = if length > 0.0 { length / speed } else { 0.0 };
        Ok(Self {
            waypoints,
            speed,
            duration,
        })
    }

    /// Hold position for `duration` seconds.
    pub fn hover(duration: f64) -> Result<Self> {
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::InvalidTrajectory(format!(
                "hover duration must be non-negative, got {duration}"
            )));
        }
        Ok(Self {
            waypoints: Vec::new(),
            speed: 0.0,
            duration,
        })
    }

    pub fn length(&self) -> f64 {
        path_length(&self.waypoints)
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

fn path_length(waypoints: &[[f64; 2]]) -> f64 {
    waypoints
        .windows(2)
        .map(|w| (w[0][0] - w[1][0]).hypot(w[0][1] - w[1][1]))
        .sum()
}

/// Energy of a constant-speed trajectory: power at that speed times the
/// mission duration.
pub fn trajectory_energy(traj: &Trajectory, params: &PowerParams) -> Result<f64> {
    Ok(propulsion_power(traj.speed, params)? * traj.duration)
}
