//! Voxel grids over the fixed cube `[-1, 1]^3`.
//!
//! [`VoxelGrid`] backs the two baseline encoders: binary occupancy and the
//! truncated distance field (TDF). Cells are stored row-major with x fastest:
//! `cell = ix + m*iy + m*m*iz`. Cell `i` covers the half-open interval
//! `[-1 + 2i/m, -1 + 2(i+1)/m)` per axis; a coordinate of exactly +1 falls
//! into the last cell. Coordinates within 1e-9 of the domain are clamped
//! inward so that freshly normalized clouds (max norm within 1e-9 of 1)
//! always map.

use crate::error::{Error, Result};

/// Clamping slack at the domain boundary.
pub(crate) const DOMAIN_TOL: f64 = 1e-9;

/// What a grid's cells hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    /// Cells are 0.0 or 1.0.
    Occupancy,
    /// Cells are distances to the nearest cloud point, clipped to `truncation`.
    Tdf { truncation: f64 },
}

/// Cubic scalar grid of resolution m per axis over `[-1, 1]^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    resolution: usize,
    cells: Vec<f64>,
    kind: GridKind,
}

impl VoxelGrid {
    pub(crate) fn from_parts(resolution: usize, cells: Vec<f64>, kind: GridKind) -> Self {
        debug_assert_eq!(cells.len(), resolution * resolution * resolution);
        Self {
            resolution,
            cells,
            kind,
        }
    }

    /// Cells per axis.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Flat cell buffer, x fastest.
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    /// Total cell count m^3.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Flat index of cell `(ix, iy, iz)`.
    #[inline]
    pub fn cell_index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        debug_assert!(ix < self.resolution && iy < self.resolution && iz < self.resolution);
        ix + self.resolution * (iy + self.resolution * iz)
    }

    /// Value of cell `(ix, iy, iz)`.
    pub fn cell(&self, ix: usize, iy: usize, iz: usize) -> f64 {
        self.cells[self.cell_index(ix, iy, iz)]
    }

    /// Center coordinates of cell `(ix, iy, iz)`.
    pub fn cell_center(&self, ix: usize, iy: usize, iz: usize) -> [f64; 3] {
        let m = self.resolution as f64;
        [
            -1.0 + 2.0 * (ix as f64 + 0.5) / m,
            -1.0 + 2.0 * (iy as f64 + 0.5) / m,
            -1.0 + 2.0 * (iz as f64 + 0.5) / m,
        ]
    }

    /// Number of cells with a value greater than zero.
    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c > 0.0).count()
    }
}

/// Axis cell of a coordinate, or `None` outside `[-1 - tol, 1 + tol]`.
#[inline]
pub(crate) fn axis_cell(coord: f64, m: usize) -> Option<usize> {
    if coord < -1.0 - DOMAIN_TOL || coord > 1.0 + DOMAIN_TOL {
        return None;
    }
    let raw = ((coord + 1.0) * 0.5 * m as f64).floor() as isize;
    Some(raw.clamp(0, m as isize - 1) as usize)
}

/// Flat cell index of a 3-d point, or a located error outside the domain.
pub(crate) fn point_cell(point: &[f64], m: usize, point_index: usize) -> Result<usize> {
    let ix = axis_cell(point[0], m);
    let iy = axis_cell(point[1], m);
    let iz = axis_cell(point[2], m);
    match (ix, iy, iz) {
        (Some(ix), Some(iy), Some(iz)) => Ok(ix + m * (iy + m * iz)),
        _ => Err(Error::PointOutOfDomain { index: point_index }),
    }
}
