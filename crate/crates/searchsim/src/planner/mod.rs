//! Path planners: boustrophedon coverage, greedy probability-order flight,
//! and the windowed receding-horizon planner.
//!
//! A planner emits the cell observed at each time step; the first emission is
//! the start cell, and every later emission is the current cell or one of its
//! 4-connected neighbors (one cell per time step). The harness scans the
//! emitted cell, then feeds the observation and the updated map back through
//! [`Planner::notify`].

mod naive;
mod windowing;
mod zigzag;

pub use naive::NaivePlanner;
pub use windowing::{
    choose_next_region, next_cell_window, window_expected_time, RegionGrid, WindowingPlanner,
};
pub use zigzag::{zigzag_plan, Corner, ZigzagPlanner};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probmap::ProbabilityMap;
use crate::sensor::Observation;

/// Step-by-step cell selection policy.
pub trait Planner {
    /// The cell to observe this time step. The first call returns the start
    /// cell; each later call moves at most one grid step.
    fn next_cell(&mut self, map: &ProbabilityMap) -> Result<usize>;

    /// Observation feedback, called after the harness has updated the map.
    /// Planners that only read the map inside [`Planner::next_cell`] can
    /// ignore it.
    fn notify(&mut self, observation: &Observation, map: &ProbabilityMap) {
        let _ = (observation, map);
    }

    fn name(&self) -> &'static str;
}

/// Planner selector used by scenario files and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannerKind {
    Zigzag,
    Naive,
    Windowing,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 3] = [
        PlannerKind::Zigzag,
        PlannerKind::Naive,
        PlannerKind::Windowing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PlannerKind::Zigzag => "zigzag",
            PlannerKind::Naive => "naive",
            PlannerKind::Windowing => "windowing",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlannerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zigzag" => Ok(PlannerKind::Zigzag),
            "naive" => Ok(PlannerKind::Naive),
            "windowing" => Ok(PlannerKind::Windowing),
            other => Err(Error::InvalidScenario(format!(
                "unknown planner '{other}' (expected zigzag, naive, or windowing)"
            ))),
        }
    }
}

/// Instantiate a planner at `start` for the given initial map. `window`
/// applies to the windowing planner only.
pub fn build_planner(
    kind: PlannerKind,
    window: usize,
    initial_map: &ProbabilityMap,
    start: usize,
) -> Result<Box<dyn Planner>> {
    let grid = initial_map.grid_arc();
    if start >= grid.cell_count() {
        return Err(Error::InvalidScenario(format!(
            "start cell {start} is outside the {}-cell grid",
            grid.cell_count()
        )));
    }
    Ok(match kind {
        PlannerKind::Zigzag => Box::new(ZigzagPlanner::new(grid.clone(), Corner::BottomLeft)),
        PlannerKind::Naive => Box::new(NaivePlanner::new(initial_map, start)),
        PlannerKind::Windowing => {
            Box::new(WindowingPlanner::new(grid.clone(), window, start)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use std::sync::Arc;

    #[test]
    fn planner_names_round_trip() {
        for kind in PlannerKind::ALL {
            assert_eq!(kind.as_str().parse::<PlannerKind>().unwrap(), kind);
        }
        assert!("diagonal".parse::<PlannerKind>().is_err());
    }

    #[test]
    fn build_rejects_out_of_grid_start() {
        let grid = Arc::new(GridSpec::with_cell_grid(30.0, 30.0, 3, 3).unwrap());
        let map = ProbabilityMap::uniform(grid);
        assert!(build_planner(PlannerKind::Zigzag, 1, &map, 9).is_err());
        assert!(build_planner(PlannerKind::Zigzag, 1, &map, 0).is_ok());
    }

    /// Every planner obeys the one-step-per-tick movement contract on a
    /// forced-non-detection walk.
    #[test]
    fn all_planners_move_at_most_one_step() {
        let grid = Arc::new(GridSpec::with_cell_grid(50.0, 40.0, 4, 5).unwrap());
        let map = ProbabilityMap::uniform(grid.clone());
        let sensor = crate::sensor::SensorModel::new(0.2, 0.0, 0).unwrap();
        for kind in PlannerKind::ALL {
            let mut planner = build_planner(kind, 2, &map, 0).unwrap();
            let mut belief = map.clone();
            let mut prev: Option<usize> = None;
            for _ in 0..120 {
                let cell = planner.next_cell(&belief).unwrap();
                if let Some(p) = prev {
                    assert!(
                        grid.grid_distance(p, cell) <= 1,
                        "{kind} jumped from {p} to {cell}"
                    );
                }
                prev = Some(cell);
                crate::sensor::update_no_detection(&mut belief, cell, &sensor).unwrap();
            }
        }
    }
}
