//! Area decomposition: camera footprint geometry and the search grid.
//!
//! The search area is a rectangle decomposed into equal cells, one camera
//! footprint each (optionally overlapping). Cells are indexed row-major with
//! the origin at the bottom-left corner, and adjacency is 4-connected.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Downward-facing camera geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraSpec {
    /// Flight altitude above ground, meters.
    pub altitude: f64,
    /// Full vertical field-of-view angle, radians in (0, pi).
    pub vertical_angle: f64,
    /// Full horizontal field-of-view angle, radians in (0, pi).
    pub horizontal_angle: f64,
}

impl CameraSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.altitude.is_finite() || self.altitude <= 0.0 {
            return Err(Error::InvalidCamera(format!(
                "altitude must be positive, got {}",
                self.altitude
            )));
        }
        for (name, angle) in [
            ("vertical_angle", self.vertical_angle),
            ("horizontal_angle", self.horizontal_angle),
        ] {
            if !angle.is_finite() || angle <= 0.0 || angle >= std::f64::consts::PI {
                return Err(Error::InvalidCamera(format!(
                    "{name} must lie in (0, pi) radians, got {angle}"
                )));
            }
        }
        Ok(())
    }
}

/// Ground rectangle (width, length) imaged from altitude `H`:
/// `w = 2H·tan(vertical/2)`, `l = 2H·tan(horizontal/2)`.
pub fn footprint(camera: &CameraSpec) -> Result<(f64, f64)> {
    camera.validate()?;
    let w = 2.0 * camera.altitude * (camera.vertical_angle / 2.0).tan();
    let l = 2.0 * camera.altitude * (camera.horizontal_angle / 2.0).tan();
    Ok((w, l))
}

/// One of the four grid directions. Rows grow northward (origin bottom-left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    /// (row delta, column delta).
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::North => (1, 0),
            Direction::East => (0, 1),
            Direction::South => (-1, 0),
            Direction::West => (0, -1),
        }
    }
}

/// Rectangular decomposition of the search area into camera-footprint cells.
///
/// Cell `k` sits at grid position `(row, col) = (k / cols, k % cols)`; its
/// waypoint is the footprint center. Consecutive waypoints along an axis are
/// spaced by the stride (footprint dimension shrunk by the overlap fraction),
/// so cells overlap on the ground when the overlap is nonzero. The last row
/// and column may overhang the area boundary rather than shrinking.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    area_width: f64,
    area_height: f64,
    cell_width: f64,
    cell_height: f64,
    overlap_x: f64,
    overlap_y: f64,
    rows: usize,
    cols: usize,
    waypoints: Vec<[f64; 2]>,
}

impl GridSpec {
    /// Decompose an `area_width × area_height` rectangle using the camera's
    /// footprint shrunk by the overlap fractions `r_x`, `r_y` in [0, 1).
    pub fn decompose(
        area_width: f64,
        area_height: f64,
        camera: &CameraSpec,
        r_x: f64,
        r_y: f64,
    ) -> Result<Self> {
        let (w, l) = footprint(camera)?;
        Self::from_cell_shape(area_width, area_height, w, l, r_x, r_y)
    }

    /// Decomposition from an explicit footprint; used by tests and by grids
    /// not derived from camera geometry.
    pub fn from_cell_shape(
        area_width: f64,
        area_height: f64,
        cell_width: f64,
        cell_height: f64,
        r_x: f64,
        r_y: f64,
    ) -> Result<Self> {
        validate_area(area_width, area_height)?;
        for (name, r) in [("overlap_x", r_x), ("overlap_y", r_y)] {
            if !r.is_finite() || !(0.0..1.0).contains(&r) {
                return Err(Error::InvalidArea(format!(
                    "{name} must lie in [0, 1), got {r}"
                )));
            }
        }
        if cell_width <= 0.0 || cell_height <= 0.0 {
            return Err(Error::InvalidArea(
                "cell footprint must be strictly positive".into(),
            ));
        }
        let stride_x = cell_width * (1.0 - r_x);
        let stride_y = cell_height * (1.0 - r_y);
        let cols = count_strides(area_width, stride_x);
        let rows = count_strides(area_height, stride_y);
        Ok(Self::assemble(
            area_width,
            area_height,
            cell_width,
            cell_height,
            r_x,
            r_y,
            rows,
            cols,
        ))
    }

    /// Synthetic grid with a fixed cell layout over the area (cells abut
    /// exactly, no overlap). Used by grid-size sweeps.
    pub fn with_cell_grid(
        area_width: f64,
        area_height: f64,
        rows: usize,
        cols: usize,
    ) -> Result<Self> {
        validate_area(area_width, area_height)?;
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArea("rows and cols must be positive".into()));
        }
        let cell_width = area_width / cols as f64;
        let cell_height = area_height / rows as f64;
        Ok(Self::assemble(
            area_width,
            area_height,
            cell_width,
            cell_height,
            0.0,
            0.0,
            rows,
            cols,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        area_width: f64,
        area_height: f64,
        cell_width: f64,
        cell_height: f64,
        overlap_x: f64,
        overlap_y: f64,
        rows: usize,
        cols: usize,
    ) -> Self {
        let stride_x = cell_width * (1.0 - overlap_x);
        let stride_y = cell_height * (1.0 - overlap_y);
        let mut waypoints = Vec::with_capacity(rows * cols);
        for row in 0..rows {
            let y = row as f64 * stride_y + cell_height / 2.0;
            for col in 0..cols {
                let x = col as f64 * stride_x + cell_width / 2.0;
                waypoints.push([x, y]);
            }
        }
        Self {
            area_width,
            area_height,
            cell_width,
            cell_height,
            overlap_x,
            overlap_y,
            rows,
            cols,
            waypoints,
        }
    }

    pub fn area_width(&self) -> f64 {
        self.area_width
    }

    pub fn area_height(&self) -> f64 {
        self.area_height
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    pub fn cell_height(&self) -> f64 {
        self.cell_height
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Total cell count.
    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Waypoint spacing along x, meters.
    pub fn stride_x(&self) -> f64 {
        self.cell_width * (1.0 - self.overlap_x)
    }

    /// Waypoint spacing along y, meters.
    pub fn stride_y(&self) -> f64 {
        self.cell_height * (1.0 - self.overlap_y)
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        row * self.cols + col
    }

    pub fn row_col(&self, cell: usize) -> (usize, usize) {
        debug_assert!(cell < self.cell_count());
        (cell / self.cols, cell % self.cols)
    }

    /// Center coordinates of a cell, meters.
    pub fn waypoint(&self, cell: usize) -> [f64; 2] {
        self.waypoints[cell]
    }

    pub fn waypoints(&self) -> &[[f64; 2]] {
        &self.waypoints
    }

    /// Euclidean distance between two cell centers, meters.
    pub fn waypoint_distance(&self, a: usize, b: usize) -> f64 {
        let [ax, ay] = self.waypoints[a];
        let [bx, by] = self.waypoints[b];
        (ax - bx).hypot(ay - by)
    }

    /// Manhattan distance in grid steps.
    pub fn grid_distance(&self, a: usize, b: usize) -> usize {
        let (ar, ac) = self.row_col(a);
        let (br, bc) = self.row_col(b);
        ar.abs_diff(br) + ac.abs_diff(bc)
    }

    /// The neighbor one step in `dir`, if it stays on the grid.
    pub fn step(&self, cell: usize, dir: Direction) -> Option<usize> {
        let (row, col) = self.row_col(cell);
        let (dr, dc) = dir.offset();
        let nr = row.checked_add_signed(dr)?;
        let nc = col.checked_add_signed(dc)?;
        (nr < self.rows && nc < self.cols).then(|| self.index(nr, nc))
    }

    /// 4-connected neighbors of a cell.
    pub fn neighbors(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |dir| self.step(cell, dir))
    }
}

fn validate_area(width: f64, height: f64) -> Result<()> {
    if !width.is_finite() || !height.is_finite() || width <= 0.0 || height <= 0.0 {
        return Err(Error::InvalidArea(format!(
            "area dimensions must be positive, got {width} x {height}"
        )));
    }
    Ok(())
}

/// Number of strides needed to cover a span: `ceil(span / stride)`, at least
/// one (a footprint larger than the area still yields one cell). The epsilon
/// absorbs representation error when the span is an exact multiple.
fn count_strides(span: f64, stride: f64) -> usize {
    ((span / stride) - 1e-9).ceil().max(1.0) as usize
}
