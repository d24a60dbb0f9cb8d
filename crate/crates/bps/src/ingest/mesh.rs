//! Triangle meshes and area-weighted surface sampling.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Indexed triangle mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

impl TriangleMesh {
    /// Build a mesh, validating that every face references three distinct
    /// in-range vertices.
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let v = vertices.len();
        for (fi, face) in faces.iter().enumerate() {
            for &idx in face {
                if idx >= v {
                    return Err(Error::IndexOutOfRange {
                        line: 0,
                        index: idx,
                        count: v,
                    });
                }
            }
            if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(Error::InvalidParams(format!(
                    "face {fi} repeats a vertex index"
                )));
            }
        }
        Ok(Self { vertices, faces })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Area of face `i` (half the cross-product norm).
    pub fn face_area(&self, i: usize) -> f64 {
        let [a, b, c] = self.faces[i];
        let va = self.vertices[a];
        let vb = self.vertices[b];
        let vc = self.vertices[c];
        let u = [vb[0] - va[0], vb[1] - va[1], vb[2] - va[2]];
        let w = [vc[0] - va[0], vc[1] - va[1], vc[2] - va[2]];
        let cx = u[1] * w[2] - u[2] * w[1];
        let cy = u[2] * w[0] - u[0] * w[2];
        let cz = u[0] * w[1] - u[1] * w[0];
        0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
    }

    /// Sum of all face areas.
    pub fn total_area(&self) -> f64 {
        (0..self.face_count()).map(|i| self.face_area(i)).sum()
    }

    /// Sample `n` points uniformly over the surface: faces are chosen
    /// proportionally to area, positions inside a face by the square-root
    /// barycentric construction. Bit-reproducible per seed.
    pub fn sample_surface(&self, n: usize, seed: u64) -> Result<PointCloud> {
        Ok(self.sample_surface_with_faces(n, seed)?.0)
    }

    /// [`Self::sample_surface`] plus the face index each point came from.
    pub fn sample_surface_with_faces(
        &self,
        n: usize,
        seed: u64,
    ) -> Result<(PointCloud, Vec<usize>)> {
        if n == 0 {
            return Err(Error::InvalidCount("sample size must be at least 1".into()));
        }
        let mut cumulative = Vec::with_capacity(self.face_count());
        let mut total = 0.0;
        for i in 0..self.face_count() {
            total += self.face_area(i);
            cumulative.push(total);
        }
        if !(total > 0.0) {
            return Err(Error::ZeroAreaMesh);
        }

        let mut rng = SeededRng::new(seed);
        let mut coords = Vec::with_capacity(n * 3);
        let mut face_ids = Vec::with_capacity(n);
        for _ in 0..n {
            // three draws per point, in a fixed order
            let target = rng.unit_f64() * total;
            let u1 = rng.unit_f64();
            let u2 = rng.unit_f64();
            let fi = cumulative
                .partition_point(|&acc| acc <= target)
                .min(self.face_count() - 1);
            let [a, b, c] = self.faces[fi];
            let va = self.vertices[a];
            let vb = self.vertices[b];
            let vc = self.vertices[c];
            // uniform in the triangle: p = (1-sqrt(u1)) A + sqrt(u1)(1-u2) B + sqrt(u1) u2 C
            let s = u1.sqrt();
            let wa = 1.0 - s;
            let wb = s * (1.0 - u2);
            let wc = s * u2;
            for d in 0..3 {
                coords.push(wa * va[d] + wb * vb[d] + wc * vc[d]);
            }
            face_ids.push(fi);
        }
        Ok((PointCloud::new(coords, 3)?, face_ids))
    }
}
