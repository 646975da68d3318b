//! Greedy probability-order planner: fly to the most probable cell, then the
//! next, with no belief updates along the way.
//!
//! The planner snapshots the initial map, commits to the highest-probability
//! cell not yet visited this sweep, and walks a shortest grid path to it.
//! Commitment never changes mid-flight; only arrival marks a cell visited.
//! Once every cell has been visited the sweep restarts. On maps with two
//! far-apart probability peaks the commitments alternate between the peaks,
//! so most flight time is spent shuttling through the corridor between them.

use std::sync::Arc;

use crate::grid::GridSpec;
use crate::probmap::ProbabilityMap;
use crate::Result;

use super::Planner;

#[derive(Debug, Clone)]
pub struct NaivePlanner {
    grid: Arc<GridSpec>,
    /// Cells in initial-probability order (descending, index ascending on
    /// ties); fixed for the planner's lifetime.
    priority: Vec<usize>,
    visited: Vec<bool>,
    remaining: usize,
    committed: Option<usize>,
    current: usize,
    started: bool,
}

impl NaivePlanner {
    pub fn new(initial_map: &ProbabilityMap, start: usize) -> Self {
        let grid = initial_map.grid_arc().clone();
        let mut priority: Vec<usize> = (0..grid.cell_count()).collect();
        priority.sort_by(|&a, &b| {
            initial_map
                .prob(b)
                .partial_cmp(&initial_map.prob(a))
                .unwrap()
                .then(a.cmp(&b))
        });
        let m = grid.cell_count();
        Self {
            grid,
            priority,
            visited: vec![false; m],
            remaining: m,
            committed: None,
            current: start,
            started: false,
        }
    }

    /// Ensure a live commitment to a cell other than the current one,
    /// recording arrivals (including the start cell when it happens to be
    /// the best) and restarting the sweep once everything has been visited.
    fn settle_commitment(&mut self) {
        loop {
            if self.remaining == 0 {
                self.visited.fill(false);
                self.remaining = self.visited.len();
            }
            let target = match self.committed {
                Some(t) => t,
                None => {
                    let t = *self
                        .priority
                        .iter()
                        .find(|&&c| !self.visited[c])
                        .expect("sweep reset leaves unvisited cells");
                    self.committed = Some(t);
                    t
                }
            };
            if target == self.current {
                self.visited[target] = true;
                self.remaining -= 1;
                self.committed = None;
                if self.visited.len() == 1 {
                    return; // single-cell grid: stay committed to nothing
                }
                continue;
            }
            return;
        }
    }

    /// One step along a shortest grid path toward `target` (ties to the
    /// lowest-index neighbor).
    fn step_toward(&self, target: usize) -> usize {
        let here = self.grid.grid_distance(self.current, target);
        self.grid
            .neighbors(self.current)
            .filter(|&n| self.grid.grid_distance(n, target) < here)
            .min()
            .expect("a shortest path always has a first step")
    }
}

impl Planner for NaivePlanner {
    fn next_cell(&mut self, _map: &ProbabilityMap) -> Result<usize> {
        if self.started {
            self.settle_commitment();
            if let Some(target) = self.committed {
                self.current = self.step_toward(target);
            }
        } else {
            self.started = true;
        }
        self.settle_commitment();
        Ok(self.current)
    }

    fn name(&self) -> &'static str {
        "naive"
    }
}
