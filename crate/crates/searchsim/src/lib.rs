//! Simulation toolkit for probabilistic target search over a gridded area.
//!
//! A downward-facing camera on a moving platform scans one grid cell per time
//! step. A probability map over the cells encodes belief about where a single
//! stationary target is; an imperfect sensor (missed detections, false alarms)
//! drives Bayesian belief updates after every observation. The crate provides:
//!
//! - area decomposition from camera geometry ([`grid`]),
//! - belief construction and sampling ([`probmap`]),
//! - the sensor model and posterior updates ([`sensor`]),
//! - closed-form expected detection times for the sorted-belief search
//!   process ([`analytics`]),
//! - coverage and belief-driven planners ([`planner`]),
//! - a rotary-wing propulsion energy model ([`energy`]),
//! - a seeded Monte Carlo harness with scenario files ([`config`], [`sim`])
//!   and plain-text/CSV reporting ([`report`]).

pub mod analytics;
pub mod config;
pub mod energy;
pub mod error;
pub mod grid;
pub mod planner;
pub mod probmap;
pub mod report;
pub mod sensor;
pub mod sim;

pub use error::{Error, Result};
