//! Boustrophedon (zigzag) coverage: sweep every row back and forth so each
//! cell is visited exactly once per pass.

use std::sync::Arc;

use crate::grid::GridSpec;
use crate::probmap::ProbabilityMap;
use crate::Result;

use super::Planner;

/// Grid corner a sweep starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    BottomLeft,
    BottomRight,
    TopLeft,
    TopRight,
}

/// The full boustrophedon visiting order: rows in sequence from the start
/// corner, column direction alternating per row. Consecutive cells are always
/// 4-adjacent and every cell appears exactly once.
pub fn zigzag_plan(grid: &GridSpec, start: Corner) -> Vec<usize> {
    let (bottom_up, left_first) = match start {
        Corner::BottomLeft => (true, true),
        Corner::BottomRight => (true, false),
        Corner::TopLeft => (false, true),
        Corner::TopRight => (false, false),
    };
    let rows: Vec<usize> = if bottom_up {
        (0..grid.rows()).collect()
    } else {
        (0..grid.rows()).rev().collect()
    };
    let mut plan = Vec::with_capacity(grid.cell_count());
    for (sweep, &row) in rows.iter().enumerate() {
        let leftward = (sweep % 2 == 0) != left_first;
        let cols: Vec<usize> = if leftward {
            (0..grid.cols()).rev().collect()
        } else {
            (0..grid.cols()).collect()
        };
        for col in cols {
            plan.push(grid.index(row, col));
        }
    }
    plan
}

/// Coverage planner that walks the zigzag plan forward, then back again
/// (ping-pong), so repeat passes never teleport across the grid.
#[derive(Debug, Clone)]
pub struct ZigzagPlanner {
    plan: Vec<usize>,
    cursor: usize,
    forward: bool,
    started: bool,
}

impl ZigzagPlanner {
    pub fn new(grid: Arc<GridSpec>, start: Corner) -> Self {
        Self {
            plan: zigzag_plan(&grid, start),
            cursor: 0,
            forward: true,
            started: false,
        }
    }
}

impl Planner for ZigzagPlanner {
    fn next_cell(&mut self, _map: &ProbabilityMap) -> Result<usize> {
        if !self.started {
            self.started = true;
            return Ok(self.plan[0]);
        }
        if self.plan.len() > 1 {
            if self.forward {
                if self.cursor + 1 == self.plan.len() {
                    self.forward = false;
                    self.cursor -= 1;
                } else {
                    self.cursor += 1;
                }
            } else if self.cursor == 0 {
                self.forward = true;
                self.cursor += 1;
            } else {
                self.cursor -= 1;
            }
        }
        Ok(self.plan[self.cursor])
    }

    fn name(&self) -> &'static str {
        "zigzag"
    }
}
