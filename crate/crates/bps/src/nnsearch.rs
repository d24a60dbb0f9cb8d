//! Nearest-neighbor queries from basis points into a point cloud.
//!
//! [`SpatialIndex`] is a ball tree: build cost O(n log n), single query cost
//! O(log n). Queries return exactly what [`brute_force_nearest`] returns —
//! the same point index and the same distance bits — under the shared
//! tie-break rule: among equidistant points the smallest point index wins.
//! Both paths accumulate squared distances with the identical statement
//! order and take one square root at the boundary, so "exact" is meaningful
//! at the bit level.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::vecmath::dist_sq;

/// Default points per leaf; tuned on the throughput benchmark.
pub const DEFAULT_LEAF_SIZE: usize = 32;

/// One nearest-neighbor answer: the cloud point index and its Euclidean
/// distance to the query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestResult {
    pub index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
struct Node {
    radius: f64,
    start: u32,
    end: u32,
    /// `u32::MAX` marks a leaf; otherwise child node ids.
    left: u32,
    right: u32,
}

const LEAF: u32 = u32::MAX;

/// Immutable ball tree over a point cloud.
///
/// Construction copies the coordinates; the tree afterwards supports any
/// number of concurrent queries.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    dim: usize,
    coords: Vec<f64>,
    order: Vec<usize>,
    nodes: Vec<Node>,
    centers: Vec<f64>,
    leaf_size: usize,
}

impl SpatialIndex {
    /// Build with the default leaf size.
    pub fn build(cloud: &PointCloud) -> Result<Self> {
        Self::build_with_leaf_size(cloud, DEFAULT_LEAF_SIZE)
    }

    /// Build with an explicit leaf size (clamped to at least 1).
    pub fn build_with_leaf_size(cloud: &PointCloud, leaf_size: usize) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let n = cloud.len();
        let mut index = SpatialIndex {
            dim: cloud.dim(),
            coords: cloud.coords().to_vec(),
            order: (0..n).collect(),
            nodes: Vec::new(),
            centers: Vec::new(),
            leaf_size: leaf_size.max(1),
        };
        index.build_node(0, n);
        Ok(index)
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Recursively build the subtree over `order[start..end]`; returns the
    /// node id.
    fn build_node(&mut self, start: usize, end: usize) -> u32 {
        let count = end - start;
        debug_assert!(count > 0);

        // Bounding ball: centroid of the subset, radius to the farthest point.
        let mut center = vec![0.0; self.dim];
        for &idx in &self.order[start..end] {
            for (c, x) in center.iter_mut().zip(self.point(idx)) {
                *c += x;
            }
        }
        for c in &mut center {
            *c /= count as f64;
        }
        let radius = self.order[start..end]
            .iter()
            .map(|&idx| dist_sq(&center, self.point(idx)))
            .fold(0.0, f64::max)
            .sqrt();

        let node_id = self.nodes.len() as u32;
        self.centers.extend_from_slice(&center);
        self.nodes.push(Node {
            radius,
            start: start as u32,
            end: end as u32,
            left: LEAF,
            right: LEAF,
        });
        if count <= self.leaf_size {
            return node_id;
        }

        // Split at the median of the axis with the largest spread. The
        // comparator is total (coordinate, then index), so the partition is
        // deterministic for any input order.
        let mut axis = 0;
        let mut best_spread = -1.0;
        for d in 0..self.dim {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &idx in &self.order[start..end] {
                let v = self.point(idx)[d];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi - lo > best_spread {
                best_spread = hi - lo;
                axis = d;
            }
        }
        let mid = start + count / 2;
        {
            let coords = &self.coords;
            let dim = self.dim;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                coords[a * dim + axis]
                    .total_cmp(&coords[b * dim + axis])
                    .then(a.cmp(&b))
            });
        }

        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        let node = &mut self.nodes[node_id as usize];
        node.left = left;
        node.right = right;
        node_id
    }

    /// Number of indexed points.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn leaf_size(&self) -> usize {
        self.leaf_size
    }

    /// Nearest cloud point to `query`; equidistant candidates resolve to the
    /// smallest point index.
    ///
    /// Panics if the query dimension differs from the indexed cloud's.
    pub fn nearest(&self, query: &[f64]) -> NearestResult {
        assert_eq!(query.len(), self.dim, "query dimension mismatch");
        let mut best_d2 = f64::INFINITY;
        let mut best_idx = usize::MAX;
        self.search(0, query, &mut best_d2, &mut best_idx);
        NearestResult {
            index: best_idx,
            distance: best_d2.sqrt(),
        }
    }

    fn node_center(&self, id: u32) -> &[f64] {
        let off = id as usize * self.dim;
        &self.centers[off..off + self.dim]
    }

    /// Squared lower bound on the distance from `query` to any point inside
    /// node `id`'s bounding ball; zero when the query is inside the ball.
    fn lower_bound_sq(&self, id: u32, query: &[f64]) -> f64 {
        let gap = dist_sq(query, self.node_center(id)).sqrt() - self.nodes[id as usize].radius;
        if gap > 0.0 {
            gap * gap
        } else {
            0.0
        }
    }

    fn search(&self, id: u32, query: &[f64], best_d2: &mut f64, best_idx: &mut usize) {
        let node = &self.nodes[id as usize];
        if node.left == LEAF {
            for &idx in &self.order[node.start as usize..node.end as usize] {
                let d2 = dist_sq(query, self.point(idx));
                if d2 < *best_d2 || (d2 == *best_d2 && idx < *best_idx) {
                    *best_d2 = d2;
                    *best_idx = idx;
                }
            }
            return;
        }
        // Visit the closer child first; an equal bound may still hide an
        // equidistant smaller index, so pruning is strict.
        let (first, second) = {
            let dl = dist_sq(query, self.node_center(node.left));
            let dr = dist_sq(query, self.node_center(node.right));
            if dl <= dr {
                (node.left, node.right)
            } else {
                (node.right, node.left)
            }
        };
        if self.lower_bound_sq(first, query) <= *best_d2 {
            self.search(first, query, best_d2, best_idx);
        }
        if self.lower_bound_sq(second, query) <= *best_d2 {
            self.search(second, query, best_d2, best_idx);
        }
    }
}

/// Build a ball tree over the cloud. Fails on an empty cloud.
pub fn build_index(cloud: &PointCloud, leaf_size: usize) -> Result<SpatialIndex> {
    SpatialIndex::build_with_leaf_size(cloud, leaf_size)
}

/// Exhaustive scan: the ground-truth oracle for [`SpatialIndex::nearest`].
/// Smallest point index wins ties.
pub fn brute_force_nearest(cloud: &PointCloud, query: &[f64]) -> Result<NearestResult> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    assert_eq!(query.len(), cloud.dim(), "query dimension mismatch");
    let mut best_d2 = f64::INFINITY;
    let mut best_idx = usize::MAX;
    for (idx, p) in cloud.points().enumerate() {
        let d2 = dist_sq(query, p);
        if d2 < best_d2 || (d2 == best_d2 && idx < best_idx) {
            best_d2 = d2;
            best_idx = idx;
        }
    }
    Ok(NearestResult {
        index: best_idx,
        distance: best_d2.sqrt(),
    })
}
