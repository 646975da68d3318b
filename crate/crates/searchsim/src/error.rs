//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by scenario validation, belief updates, and planners.
#[derive(Debug, Error)]
pub enum Error {
    /// Camera geometry is unusable (non-positive altitude, angle outside (0, pi)).
    #[error("invalid camera: {0}")]
    InvalidCamera(String),

    /// Search area or overlap parameters are unusable.
    #[error("invalid area: {0}")]
    InvalidArea(String),

    /// Target distribution parameters are unusable.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Sensor error rates outside their valid ranges.
    #[error("invalid sensor: {0}")]
    InvalidSensor(String),

    /// A probability vector is not a valid distribution.
    #[error("invalid probability map: {0}")]
    InvalidProbability(String),

    /// A belief update cannot proceed (zero predictive mass).
    #[error("degenerate posterior: {0}")]
    DegeneratePosterior(String),

    /// Negative or non-finite speed.
    #[error("invalid speed: {0} m/s")]
    InvalidSpeed(f64),

    /// Trajectory parameters are unusable.
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    /// A closed-form expectation does not exist for the given parameters.
    #[error("expected detection time diverges: {0}")]
    DivergentExpectation(String),

    /// A planner has no legal move from its current cell.
    #[error("planner stuck at cell {0}: no admissible move")]
    PlannerStuck(usize),

    /// Scenario-level configuration problem.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scenario parse error: {0}")]
    Parse(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
