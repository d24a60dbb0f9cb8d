//! Point clouds and unit-ball normalization.
//!
//! A [`PointCloud`] is an ordered list of d-dimensional points stored as one
//! flat coordinate buffer. Point order is part of the cloud's identity:
//! nearest-neighbor ties are broken by the smallest point index, so two
//! clouds with the same points in different orders are distinct inputs.

use crate::error::{Error, Result};
use crate::vecmath::{norm, norm_sq};

/// Ordered set of d-dimensional points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
}

impl PointCloud {
    /// Build a cloud from a flat point-major coordinate buffer.
    ///
    /// Rejects `dim == 0`, buffers whose length is not a multiple of `dim`,
    /// and non-finite coordinates.
    pub fn new(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be positive".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::InvalidParams(format!(
                "coordinate buffer length {} is not a multiple of dimension {}",
                coords.len(),
                dim
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams(
                "coordinates must be finite".into(),
            ));
        }
        Ok(Self { coords, dim })
    }

    /// Build a 3-d cloud from point rows.
    pub fn from_rows(points: &[[f64; 3]]) -> Self {
        let coords = points.iter().flatten().copied().collect();
        Self { coords, dim: 3 }
    }

    /// Cloud with zero points.
    pub fn empty(dim: usize) -> Self {
        Self {
            coords: Vec::new(),
            dim,
        }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Point dimension d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of point `i`.
    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Iterate points in index order.
    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// The flat point-major coordinate buffer.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Largest point norm; 0 for an empty cloud.
    pub fn max_norm(&self) -> f64 {
        self.points().map(norm).fold(0.0, f64::max)
    }

    /// Mean of all points; `None` for an empty cloud.
    pub fn centroid(&self) -> Option<Vec<f64>> {
        if self.is_empty() {
            return None;
        }
        let n = self.len() as f64;
        let mut c = vec![0.0; self.dim];
        for p in self.points() {
            for (acc, x) in c.iter_mut().zip(p) {
                *acc += x;
            }
        }
        for acc in &mut c {
            *acc /= n;
        }
        Some(c)
    }
}

/// Centroid and scale recovered by [`normalize`]; inverts via [`denormalize`].
///
/// `normalized = (original - centroid) / scale`, both fields in the original
/// cloud's units.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationTransform {
    centroid: Vec<f64>,
    scale: f64,
}

impl NormalizationTransform {
    pub fn new(centroid: Vec<f64>, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParams(format!(
                "scale must be a positive finite number, got {scale}"
            )));
        }
        Ok(Self { centroid, scale })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            centroid: vec![0.0; dim],
            scale: 1.0,
        }
    }

    pub fn centroid(&self) -> &[f64] {
        &self.centroid
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.centroid.len()
    }
}

/// Denominators below this are treated as a degenerate (single-location) cloud.
const DEGENERATE_SCALE: f64 = 1e-12;

/// Center a cloud on its centroid and scale it by its maximal point norm so
/// it fits the unit ball. Returns the normalized cloud and the transform that
/// maps original coordinates onto it.
///
/// Fails with [`Error::EmptyCloud`] for zero points and
/// [`Error::DegenerateCloud`] when all points coincide (scale below 1e-12).
pub fn normalize(cloud: &PointCloud) -> Result<(PointCloud, NormalizationTransform)> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let centroid = cloud.centroid().expect("non-empty cloud");
    let mut centered = Vec::with_capacity(cloud.coords().len());
    for p in cloud.points() {
        for (x, c) in p.iter().zip(&centroid) {
            centered.push(x - c);
        }
    }
    let scale = centered
        .chunks_exact(cloud.dim())
        .map(norm)
        .fold(0.0, f64::max);
    if scale < DEGENERATE_SCALE {
        return Err(Error::DegenerateCloud);
    }
    for x in &mut centered {
        *x /= scale;
    }
    let normalized = PointCloud {
        coords: centered,
        dim: cloud.dim(),
    };
    Ok((normalized, NormalizationTransform { centroid, scale }))
}

/// Map a normalized cloud back into original units: `x * scale + centroid`.
pub fn denormalize(cloud: &PointCloud, t: &NormalizationTransform) -> Result<PointCloud> {
    if cloud.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            got: cloud.dim(),
        });
    }
    let mut coords = Vec::with_capacity(cloud.coords().len());
    for p in cloud.points() {
        for (x, c) in p.iter().zip(t.centroid()) {
            coords.push(x * t.scale + c);
        }
    }
    Ok(PointCloud {
        coords,
        dim: cloud.dim(),
    })
}

/// True when the cloud's largest point norm is within `tol` of the unit ball.
pub(crate) fn is_unit_normalized(cloud: &PointCloud, tol: f64) -> bool {
    cloud.max_norm() <= 1.0 + tol
}

#[allow(dead_code)]
fn _assert_norm_sq_used() {
    // norm_sq is shared with sibling modules.
    let _ = norm_sq(&[0.0]);
}
