//! Fixed-length encodings of point clouds.
//!
//! The BPS encoders measure, for every basis point, the nearest cloud point:
//! either the scalar distance ([`encode_bps_distance`]) or the full delta
//! vector ([`encode_bps_delta`]). Both run one ball-tree build plus k queries,
//! O(n log n + k log n) per cloud. The grid baselines ([`encode_occupancy`],
//! [`encode_tdf`]) discretize the same cloud over `[-1, 1]^3`.
//!
//! Distance features are permutation-invariant bit-for-bit. Delta features
//! depend on the argmin tie-break (smallest point index), so they are
//! permutation-invariant except when an exact distance tie reorders the
//! argmin. Every feature moves by at most eps under any point perturbation
//! bounded by eps.

use crate::basis::BasisPointSet;
use crate::cloud::{is_unit_normalized, PointCloud};
use crate::error::{Error, Result};
use crate::nnsearch::{SpatialIndex, DEFAULT_LEAF_SIZE};
use crate::voxel::{point_cell, GridKind, VoxelGrid};
use rayon::prelude::*;

/// Unnormalized clouds are rejected above this max-norm threshold unless the
/// caller opts in via [`BpsEncoder::allow_unnormalized`].
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Which feature a BPS encoding stores per basis point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    /// One scalar: the distance to the nearest cloud point.
    Distance,
    /// One d-vector: nearest cloud point minus basis point.
    Delta,
}

/// Per-point attribute rows (normals, colors, ...) carried alongside a cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeTable {
    values: Vec<f64>,
    width: usize,
}

impl AttributeTable {
    /// Build from a flat row-major buffer of `width` columns.
    pub fn new(values: Vec<f64>, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidParams(
                "attribute width must be positive".into(),
            ));
        }
        if values.len() % width != 0 {
            return Err(Error::InvalidParams(format!(
                "attribute buffer length {} is not a multiple of width {}",
                values.len(),
                width
            )));
        }
        Ok(Self { values, width })
    }

    pub fn rows(&self) -> usize {
        self.values.len() / self.width
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Fixed-length BPS feature vector for one cloud.
///
/// `values` holds k scalars (distance kind) or k*d delta components (delta
/// kind). In-memory encodings also carry the argmin indices and, for the
/// delta kind, exact copies of the argmin coordinates so that decoding
/// returns bit-exact members of the source cloud; the serialized form drops
/// these and stores the delta components alone.
#[derive(Debug, Clone, PartialEq)]
pub struct BpsEncoding {
    kind: FeatureKind,
    dim: usize,
    values: Vec<f64>,
    nearest: Option<Vec<usize>>,
    nearest_points: Option<Vec<f64>>,
    payload: Option<AttributeTable>,
    basis_id: u64,
    source_len: Option<usize>,
}

impl BpsEncoding {
    pub(crate) fn from_parts(
        kind: FeatureKind,
        dim: usize,
        values: Vec<f64>,
        nearest: Option<Vec<usize>>,
        nearest_points: Option<Vec<f64>>,
        basis_id: u64,
        source_len: Option<usize>,
    ) -> Self {
        Self {
            kind,
            dim,
            values,
            nearest,
            nearest_points,
            payload: None,
            basis_id,
            source_len,
        }
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    /// Number of basis points k.
    pub fn len(&self) -> usize {
        match self.kind {
            FeatureKind::Distance => self.values.len(),
            FeatureKind::Delta => self.values.len() / self.dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Content hash of the generating basis.
    pub fn basis_id(&self) -> u64 {
        self.basis_id
    }

    /// Cardinality of the cloud this encoding was computed from, if known.
    pub fn source_len(&self) -> Option<usize> {
        self.source_len
    }

    /// Raw feature buffer: k scalars or k*d delta components.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Distance features, when this is a distance encoding.
    pub fn distances(&self) -> Option<&[f64]> {
        matches!(self.kind, FeatureKind::Distance).then_some(self.values.as_slice())
    }

    /// Delta vector of basis point `j`, when this is a delta encoding.
    pub fn delta(&self, j: usize) -> Option<&[f64]> {
        matches!(self.kind, FeatureKind::Delta)
            .then(|| &self.values[j * self.dim..(j + 1) * self.dim])
    }

    /// Argmin cloud index per basis point; `None` on deserialized encodings.
    pub fn nearest_indices(&self) -> Option<&[usize]> {
        self.nearest.as_deref()
    }

    /// Exact argmin coordinates per basis point (delta kind, in-memory only).
    pub fn nearest_points(&self) -> Option<&[f64]> {
        self.nearest_points.as_deref()
    }

    pub fn payload(&self) -> Option<&AttributeTable> {
        self.payload.as_ref()
    }

    /// The flat feature vector used by learners; same as [`Self::values`].
    pub fn feature_vector(&self) -> &[f64] {
        &self.values
    }
}

/// Reusable encoder holding a basis and encode options.
#[derive(Debug, Clone)]
pub struct BpsEncoder<'a> {
    basis: &'a BasisPointSet,
    allow_unnormalized: bool,
    leaf_size: usize,
}

impl<'a> BpsEncoder<'a> {
    pub fn new(basis: &'a BasisPointSet) -> Self {
        Self {
            basis,
            allow_unnormalized: false,
            leaf_size: DEFAULT_LEAF_SIZE,
        }
    }

    /// Accept clouds whose max norm exceeds the unit ball. Intended for
    /// raw-coordinate use against a custom-radius basis; the default rejects
    /// such clouds because every standard pipeline normalizes first.
    pub fn allow_unnormalized(mut self, yes: bool) -> Self {
        self.allow_unnormalized = yes;
        self
    }

    /// Ball-tree leaf size used for the per-cloud index.
    pub fn leaf_size(mut self, leaf_size: usize) -> Self {
        self.leaf_size = leaf_size.max(1);
        self
    }

    fn check_cloud(&self, cloud: &PointCloud) -> Result<()> {
        if cloud.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if cloud.dim() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                got: cloud.dim(),
            });
        }
        if !self.allow_unnormalized && !is_unit_normalized(cloud, NORMALIZATION_TOL) {
            return Err(Error::CloudNotNormalized {
                max_norm: cloud.max_norm(),
            });
        }
        Ok(())
    }

    /// Distance features: `values[j] = min_x ||b_j - x||`.
    pub fn distance(&self, cloud: &PointCloud) -> Result<BpsEncoding> {
        self.check_cloud(cloud)?;
        let index = SpatialIndex::build_with_leaf_size(cloud, self.leaf_size)?;
        let hits: Vec<_> = (0..self.basis.len())
            .into_par_iter()
            .map(|j| index.nearest(self.basis.point(j)))
            .collect();
        let values = hits.iter().map(|h| h.distance).collect();
        let nearest = hits.iter().map(|h| h.index).collect();
        Ok(BpsEncoding::from_parts(
            FeatureKind::Distance,
            cloud.dim(),
            values,
            Some(nearest),
            None,
            self.basis.content_id(),
            Some(cloud.len()),
        ))
    }

    /// Delta features: `values[j] = argmin_x ||b_j - x|| - b_j`, argmin ties
    /// resolved to the smallest point index.
    pub fn delta(&self, cloud: &PointCloud) -> Result<BpsEncoding> {
        self.check_cloud(cloud)?;
        let index = SpatialIndex::build_with_leaf_size(cloud, self.leaf_size)?;
        let dim = cloud.dim();
        let hits: Vec<_> = (0..self.basis.len())
            .into_par_iter()
            .map(|j| index.nearest(self.basis.point(j)))
            .collect();
        let mut values = Vec::with_capacity(hits.len() * dim);
        let mut nearest = Vec::with_capacity(hits.len());
        let mut nearest_points = Vec::with_capacity(hits.len() * dim);
        for (j, hit) in hits.iter().enumerate() {
            let b = self.basis.point(j);
            let x = cloud.point(hit.index);
            for c in 0..dim {
                values.push(x[c] - b[c]);
            }
            nearest_points.extend_from_slice(x);
            nearest.push(hit.index);
        }
        Ok(BpsEncoding::from_parts(
            FeatureKind::Delta,
            dim,
            values,
            Some(nearest),
            Some(nearest_points),
            self.basis.content_id(),
            Some(cloud.len()),
        ))
    }

    /// Encode many clouds against the shared basis, one index per cloud.
    /// Parallelizes across clouds; each result is independent of batch order
    /// and worker count.
    pub fn distance_batch(&self, clouds: &[PointCloud]) -> Result<Vec<BpsEncoding>> {
        clouds.par_iter().map(|c| self.distance(c)).collect()
    }

    /// Batch form of [`Self::delta`].
    pub fn delta_batch(&self, clouds: &[PointCloud]) -> Result<Vec<BpsEncoding>> {
        clouds.par_iter().map(|c| self.delta(c)).collect()
    }
}

/// Distance-kind BPS features of one normalized cloud.
pub fn encode_bps_distance(cloud: &PointCloud, basis: &BasisPointSet) -> Result<BpsEncoding> {
    BpsEncoder::new(basis).distance(cloud)
}

/// Delta-kind BPS features of one normalized cloud.
pub fn encode_bps_delta(cloud: &PointCloud, basis: &BasisPointSet) -> Result<BpsEncoding> {
    BpsEncoder::new(basis).delta(cloud)
}

/// Copy, per basis point, the attribute row of its nearest cloud point into
/// the encoding's payload. The table must have one row per source-cloud
/// point.
pub fn attach_payload(mut enc: BpsEncoding, attrs: &AttributeTable) -> Result<BpsEncoding> {
    let nearest = enc.nearest.as_ref().ok_or(Error::MissingNearestIndices)?;
    let expected = enc.source_len.unwrap_or(0);
    if attrs.rows() != expected {
        return Err(Error::AttributeCardinalityMismatch {
            expected,
            got: attrs.rows(),
        });
    }
    let mut values = Vec::with_capacity(nearest.len() * attrs.width());
    for &i in nearest {
        values.extend_from_slice(attrs.row(i));
    }
    enc.payload = Some(AttributeTable {
        values,
        width: attrs.width(),
    });
    Ok(enc)
}

fn check_grid_input(cloud: &PointCloud, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidResolution(m, 1));
    }
    if cloud.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: cloud.dim(),
        });
    }
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(())
}

/// Binary occupancy grid: cell = 1.0 iff it contains at least one point.
pub fn encode_occupancy(cloud: &PointCloud, m: usize) -> Result<VoxelGrid> {
    check_grid_input(cloud, m)?;
    let mut cells = vec![0.0; m * m * m];
    for (i, p) in cloud.points().enumerate() {
        cells[point_cell(p, m, i)?] = 1.0;
    }
    Ok(VoxelGrid::from_parts(m, cells, GridKind::Occupancy))
}

/// Truncation equal to one cell diagonal, `2*sqrt(3)/m`: the distance beyond
/// which a cell stores no information about its own neighborhood.
pub fn default_tdf_truncation(m: usize) -> f64 {
    2.0 * 3.0f64.sqrt() / m as f64
}

/// Truncated distance field: cell = min(distance from cell center to the
/// nearest cloud point, `truncation`).
pub fn encode_tdf(cloud: &PointCloud, m: usize, truncation: f64) -> Result<VoxelGrid> {
    check_grid_input(cloud, m)?;
    if !(truncation > 0.0) || !truncation.is_finite() {
        return Err(Error::InvalidTruncation(truncation));
    }
    for (i, p) in cloud.points().enumerate() {
        point_cell(p, m, i)?;
    }
    let index = SpatialIndex::build(cloud)?;
    let template = VoxelGrid::from_parts(
        m,
        vec![0.0; m * m * m],
        GridKind::Tdf { truncation },
    );
    let cells: Vec<f64> = (0..m * m * m)
        .into_par_iter()
        .map(|flat| {
            let ix = flat % m;
            let iy = (flat / m) % m;
            let iz = flat / (m * m);
            let center = template.cell_center(ix, iy, iz);
            index.nearest(&center).distance.min(truncation)
        })
        .collect();
    Ok(VoxelGrid::from_parts(m, cells, GridKind::Tdf { truncation }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{generate_uniform_ball, BasisStrategy};
    use crate::nnsearch::brute_force_nearest;
    use crate::rng::SeededRng;
    use crate::vecmath::norm;

    fn raw_two_point_cloud() -> PointCloud {
        PointCloud::from_rows(&[[0.0, 0.0, 1.0], [0.0, 2.0, 0.0]])
    }

    fn tiny_basis() -> BasisPointSet {
        BasisPointSet::from_parts(
            vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            3,
            1.0,
            BasisStrategy::UniformBall,
            0,
        )
    }

    fn random_unit_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = SeededRng::new(seed);
        let mut coords = Vec::with_capacity(n * 3);
        for _ in 0..n {
            loop {
                let x = rng.range_f64(-1.0, 1.0);
                let y = rng.range_f64(-1.0, 1.0);
                let z = rng.range_f64(-1.0, 1.0);
                if x * x + y * y + z * z <= 1.0 {
                    coords.extend_from_slice(&[x, y, z]);
                    break;
                }
            }
        }
        PointCloud::new(coords, 3).unwrap()
    }

    #[test]
    fn distance_example() {
        let enc = BpsEncoder::new(&tiny_basis())
            .allow_unnormalized(true)
            .distance(&raw_two_point_cloud())
            .unwrap();
        let values = enc.distances().unwrap();
        assert_eq!(values[0], 1.0);
        assert!((values[1] - 2.0f64.sqrt()).abs() < 1e-15);
        assert_eq!(enc.nearest_indices().unwrap(), &[0, 0]);
    }

    #[test]
    fn coincident_basis_point_gives_zero() {
        let cloud = random_unit_cloud(64, 3);
        let mut coords = vec![0.0; 3];
        coords.extend_from_slice(cloud.point(17));
        let basis =
            BasisPointSet::from_parts(coords, 3, 1.0, BasisStrategy::UniformBall, 0);
        let enc = encode_bps_distance(&cloud, &basis).unwrap();
        assert_eq!(enc.distances().unwrap()[1], 0.0);
    }

    #[test]
    fn delta_example() {
        let enc = BpsEncoder::new(&tiny_basis())
            .allow_unnormalized(true)
            .delta(&raw_two_point_cloud())
            .unwrap();
        assert_eq!(enc.delta(0).unwrap(), &[0.0, 0.0, 1.0]);
        assert_eq!(enc.delta(1).unwrap(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn delta_norm_matches_distance_feature() {
        let cloud = random_unit_cloud(256, 8);
        let basis = generate_uniform_ball(128, 1.0, 5).unwrap();
        let dist = encode_bps_distance(&cloud, &basis).unwrap();
        let delta = encode_bps_delta(&cloud, &basis).unwrap();
        for j in 0..basis.len() {
            let n = norm(delta.delta(j).unwrap());
            assert!((n - dist.distances().unwrap()[j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn features_match_brute_force_oracle() {
        for seed in 0..10 {
            let cloud = random_unit_cloud(200, seed);
            let basis = generate_uniform_ball(64, 1.0, seed + 100).unwrap();
            let enc = encode_bps_distance(&cloud, &basis).unwrap();
            for j in 0..basis.len() {
                let want = brute_force_nearest(&cloud, basis.point(j)).unwrap();
                assert_eq!(enc.distances().unwrap()[j].to_bits(), want.distance.to_bits());
                assert_eq!(enc.nearest_indices().unwrap()[j], want.index);
            }
        }
    }

    #[test]
    fn unnormalized_cloud_rejected_without_override() {
        let cloud = raw_two_point_cloud(); // max norm 2
        let basis = tiny_basis();
        assert!(matches!(
            encode_bps_distance(&cloud, &basis),
            Err(Error::CloudNotNormalized { .. })
        ));
        assert!(BpsEncoder::new(&basis)
            .allow_unnormalized(true)
            .distance(&cloud)
            .is_ok());
    }

    #[test]
    fn permutation_invariance_of_distances() {
        let cloud = random_unit_cloud(128, 21);
        let mut reversed_rows: Vec<f64> = Vec::new();
        for i in (0..cloud.len()).rev() {
            reversed_rows.extend_from_slice(cloud.point(i));
        }
        let reversed = PointCloud::new(reversed_rows, 3).unwrap();
        let basis = generate_uniform_ball(64, 1.0, 2).unwrap();
        let a = encode_bps_distance(&cloud, &basis).unwrap();
        let b = encode_bps_distance(&reversed, &basis).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn distance_features_are_lipschitz_under_perturbation() {
        let cloud = random_unit_cloud(200, 31);
        let basis = generate_uniform_ball(100, 1.0, 6).unwrap();
        let before = encode_bps_distance(&cloud, &basis).unwrap();
        let mut rng = SeededRng::new(77);
        for &eps in &[1e-4, 1e-2] {
            let coords: Vec<f64> = cloud
                .coords()
                .iter()
                .map(|c| c + rng.range_f64(-eps, eps) / 3.0f64.sqrt())
                .collect();
            let moved = PointCloud::new(coords, 3).unwrap();
            let after = BpsEncoder::new(&basis)
                .allow_unnormalized(true)
                .distance(&moved)
                .unwrap();
            for (a, b) in before.values().iter().zip(after.values()) {
                assert!((a - b).abs() <= eps + 1e-12);
            }
        }
    }

    #[test]
    fn payload_constant_table() {
        let cloud = random_unit_cloud(32, 4);
        let basis = generate_uniform_ball(16, 1.0, 4).unwrap();
        let enc = encode_bps_distance(&cloud, &basis).unwrap();
        let attrs = AttributeTable::new(vec![7.5; 32], 1).unwrap();
        let enc = attach_payload(enc, &attrs).unwrap();
        let payload = enc.payload().unwrap();
        assert_eq!(payload.rows(), 16);
        assert!(payload.values().iter().all(|&v| v == 7.5));
    }

    #[test]
    fn payload_of_coordinates_equals_nearest_points() {
        let cloud = random_unit_cloud(64, 5);
        let basis = generate_uniform_ball(32, 1.0, 9).unwrap();
        let enc = encode_bps_delta(&cloud, &basis).unwrap();
        let attrs = AttributeTable::new(cloud.coords().to_vec(), 3).unwrap();
        let enc = attach_payload(enc, &attrs).unwrap();
        assert_eq!(enc.payload().unwrap().values(), enc.nearest_points().unwrap());
    }

    #[test]
    fn payload_outward_sphere_normals_face_outward() {
        // exact unit-sphere samples; the outward normal at a sample is the
        // sample itself, so normal . (b + delta) = ||x||^2 = 1 > 0
        let mut rng = SeededRng::new(15);
        let mut coords = Vec::new();
        for _ in 0..256 {
            let p = loop {
                let x = rng.range_f64(-1.0, 1.0);
                let y = rng.range_f64(-1.0, 1.0);
                let z = rng.range_f64(-1.0, 1.0);
                let n = (x * x + y * y + z * z).sqrt();
                if n > 1e-3 && n <= 1.0 {
                    break [x / n, y / n, z / n];
                }
            };
            coords.extend_from_slice(&p);
        }
        let cloud = PointCloud::new(coords, 3).unwrap();
        let basis = generate_uniform_ball(64, 1.0, 11).unwrap();
        let enc = BpsEncoder::new(&basis)
            .allow_unnormalized(true)
            .delta(&cloud)
            .unwrap();
        let normals = AttributeTable::new(cloud.coords().to_vec(), 3).unwrap();
        let enc = attach_payload(enc, &normals).unwrap();
        for j in 0..basis.len() {
            let normal = enc.payload().unwrap().row(j);
            let target = &enc.nearest_points().unwrap()[j * 3..(j + 1) * 3];
            let dot: f64 = normal.iter().zip(target).map(|(a, b)| a * b).sum();
            assert!(dot > 0.0);
        }
    }

    #[test]
    fn payload_cardinality_mismatch() {
        let cloud = random_unit_cloud(32, 4);
        let basis = generate_uniform_ball(16, 1.0, 4).unwrap();
        let enc = encode_bps_distance(&cloud, &basis).unwrap();
        let attrs = AttributeTable::new(vec![0.0; 31], 1).unwrap();
        assert!(matches!(
            attach_payload(enc, &attrs),
            Err(Error::AttributeCardinalityMismatch { .. })
        ));
    }

    #[test]
    fn occupancy_single_point() {
        let cloud = PointCloud::from_rows(&[[0.5, 0.5, 0.5]]);
        let grid = encode_occupancy(&cloud, 2).unwrap();
        assert_eq!(grid.occupied_count(), 1);
        assert_eq!(grid.cell(1, 1, 1), 1.0);
    }

    #[test]
    fn occupancy_lower_boundary() {
        let cloud = PointCloud::from_rows(&[[-1.0, -1.0, -1.0]]);
        let grid = encode_occupancy(&cloud, 2).unwrap();
        assert_eq!(grid.cell(0, 0, 0), 1.0);
        assert_eq!(grid.occupied_count(), 1);
    }

    #[test]
    fn occupancy_upper_boundary_clamps() {
        let cloud = PointCloud::from_rows(&[[1.0, 1.0, 1.0]]);
        let grid = encode_occupancy(&cloud, 4).unwrap();
        assert_eq!(grid.cell(3, 3, 3), 1.0);
    }

    #[test]
    fn occupancy_out_of_domain() {
        let cloud = PointCloud::from_rows(&[[0.0, 0.0, 0.0], [1.5, 0.0, 0.0]]);
        assert!(matches!(
            encode_occupancy(&cloud, 2),
            Err(Error::PointOutOfDomain { index: 1 })
        ));
    }

    #[test]
    fn occupancy_count_bound() {
        for seed in 0..8 {
            let n = 50 + seed as usize * 37;
            let cloud = random_unit_cloud(n, seed);
            for m in [2, 4, 8] {
                let grid = encode_occupancy(&cloud, m).unwrap();
                assert!(grid.occupied_count() <= n.min(m * m * m));
                assert!(grid.cells().iter().all(|&c| c == 0.0 || c == 1.0));
            }
        }
    }

    #[test]
    fn tdf_single_point_example() {
        let cloud = PointCloud::from_rows(&[[0.5, 0.5, 0.5]]);
        let tau = 3.0f64.sqrt();
        let grid = encode_tdf(&cloud, 2, tau).unwrap();
        assert_eq!(grid.cell(1, 1, 1), 0.0);
        assert!((grid.cell(0, 0, 0) - tau).abs() < 1e-12);
    }

    #[test]
    fn tdf_with_huge_truncation_matches_plain_distances() {
        let cloud = random_unit_cloud(100, 9);
        let grid = encode_tdf(&cloud, 4, 1e9).unwrap();
        for iz in 0..4 {
            for iy in 0..4 {
                for ix in 0..4 {
                    let center = grid.cell_center(ix, iy, iz);
                    let want = brute_force_nearest(&cloud, &center).unwrap().distance;
                    assert_eq!(grid.cell(ix, iy, iz).to_bits(), want.to_bits());
                }
            }
        }
    }

    #[test]
    fn tdf_monotone_in_truncation() {
        let cloud = random_unit_cloud(64, 10);
        let lo = encode_tdf(&cloud, 4, 0.2).unwrap();
        let hi = encode_tdf(&cloud, 4, 0.5).unwrap();
        for (a, b) in lo.cells().iter().zip(hi.cells()) {
            assert!(b >= a);
            assert!(*a <= 0.2 + 1e-15);
        }
    }

    #[test]
    fn tdf_invalid_truncation() {
        let cloud = random_unit_cloud(8, 2);
        assert!(matches!(
            encode_tdf(&cloud, 2, 0.0),
            Err(Error::InvalidTruncation(_))
        ));
    }

    #[test]
    fn bps_cells_all_informative_where_occupancy_is_sparse() {
        // surface-ish cloud: occupancy leaves empty cells, BPS features are
        // all positive (no basis point sits exactly on the surface)
        let mut rng = SeededRng::new(33);
        let mut coords = Vec::new();
        for _ in 0..512 {
            loop {
                let x = rng.range_f64(-1.0, 1.0);
                let y = rng.range_f64(-1.0, 1.0);
                let z = rng.range_f64(-1.0, 1.0);
                let n = (x * x + y * y + z * z).sqrt();
                if n > 1e-3 {
                    coords.extend_from_slice(&[x / n * 0.9, y / n * 0.9, z / n * 0.9]);
                    break;
                }
            }
        }
        let cloud = PointCloud::new(coords, 3).unwrap();
        let grid = encode_occupancy(&cloud, 8).unwrap();
        assert!(grid.occupied_count() < grid.len());
        let basis = generate_uniform_ball(256, 1.0, 17).unwrap();
        let enc = encode_bps_distance(&cloud, &basis).unwrap();
        assert!(enc.distances().unwrap().iter().all(|&d| d > 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let cloud = PointCloud::new(vec![0.0, 0.0, 0.5, 0.5], 2).unwrap();
        let basis = tiny_basis();
        assert!(matches!(
            encode_bps_distance(&cloud, &basis),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            encode_occupancy(&cloud, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn batch_matches_single() {
        let clouds: Vec<PointCloud> = (0..6).map(|s| random_unit_cloud(120, s)).collect();
        let basis = generate_uniform_ball(48, 1.0, 3).unwrap();
        let encoder = BpsEncoder::new(&basis);
        let batch = encoder.delta_batch(&clouds).unwrap();
        for (cloud, enc) in clouds.iter().zip(&batch) {
            let single = encoder.delta(cloud).unwrap();
            assert_eq!(single, *enc);
        }
    }
}
