//! Basis point set construction.
//!
//! A basis point set is an ordered, fixed list of k points that every cloud
//! in a dataset is encoded against; feature index j always refers to basis
//! point j. Four arrangements are provided:
//!
//! - [`generate_rect_grid`]: an m^3 lattice spanning the `[-r, r]^3` cube,
//!   row-major with x fastest. The fixed ordering lets grid consumers apply
//!   3D convolutions over the feature vector.
//! - [`generate_ball_grid`]: the same lattice with the cube corners trimmed
//!   away, keeping the k in-ball points of smallest norm.
//! - [`generate_uniform_ball`]: k i.i.d. points uniform in the ball of
//!   radius r, by rejection sampling from the enclosing cube.
//! - [`generate_hcp`]: a hexagonal-close-packing lattice, scaled so that at
//!   least k sites fall inside the ball, keeping the k of smallest norm.
//!
//! All constructors are deterministic: grid and HCP layouts are functions of
//! their arguments alone, and ball sampling is keyed by an explicit seed (see
//! [`crate::rng`] for the pinned generator).

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::vecmath::{dist_sq, norm_sq};
use sha2::{Digest, Sha256};

/// How a basis point set was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisStrategy {
    /// Rectangular grid over the `[-r, r]^3` cube.
    RectGrid,
    /// Rectangular grid trimmed to the ball of radius r.
    BallGrid,
    /// Uniform rejection sampling inside the ball.
    UniformBall,
    /// Hexagonal close packing trimmed to the ball.
    Hcp,
}

impl BasisStrategy {
    pub fn name(self) -> &'static str {
        match self {
            BasisStrategy::RectGrid => "rect-grid",
            BasisStrategy::BallGrid => "ball-grid",
            BasisStrategy::UniformBall => "uniform-ball",
            BasisStrategy::Hcp => "hcp",
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            BasisStrategy::RectGrid => 0,
            BasisStrategy::BallGrid => 1,
            BasisStrategy::UniformBall => 2,
            BasisStrategy::Hcp => 3,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(BasisStrategy::RectGrid),
            1 => Some(BasisStrategy::BallGrid),
            2 => Some(BasisStrategy::UniformBall),
            3 => Some(BasisStrategy::Hcp),
            _ => None,
        }
    }

    /// Parse a user-facing name as accepted by the CLI.
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "rect" | "rect-grid" => Some(BasisStrategy::RectGrid),
            "ball" | "ball-grid" => Some(BasisStrategy::BallGrid),
            "uniform" | "uniform-ball" => Some(BasisStrategy::UniformBall),
            "hcp" => Some(BasisStrategy::Hcp),
            _ => None,
        }
    }
}

impl std::fmt::Display for BasisStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered, fixed set of k basis points plus its provenance.
///
/// The point order is stable and serialized; encodings refer to basis points
/// by index. `seed` is 0 for the deterministic strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPointSet {
    coords: Vec<f64>,
    dim: usize,
    radius: f64,
    strategy: BasisStrategy,
    seed: u64,
}

impl BasisPointSet {
    pub(crate) fn from_parts(
        coords: Vec<f64>,
        dim: usize,
        radius: f64,
        strategy: BasisStrategy,
        seed: u64,
    ) -> Self {
        debug_assert!(dim > 0 && coords.len() % dim == 0);
        Self {
            coords,
            dim,
            radius,
            strategy,
            seed,
        }
    }

    /// Number of basis points k.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn strategy(&self) -> BasisStrategy {
        self.strategy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Coordinates of basis point `j`.
    #[inline]
    pub fn point(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    /// Iterate basis points in index order.
    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Content hash identifying this exact basis: the first eight bytes
    /// (little-endian) of the SHA-256 over strategy tag, seed, radius bits,
    /// k, d and every coordinate's bits. Encodings carry it so decoders can
    /// reject a mismatched basis.
    pub fn content_id(&self) -> u64 {
        let mut hasher = Sha256::new();
        hasher.update(b"bps-basis-v1");
        hasher.update([self.strategy.tag()]);
        hasher.update(self.seed.to_le_bytes());
        hasher.update(self.radius.to_bits().to_le_bytes());
        hasher.update((self.len() as u64).to_le_bytes());
        hasher.update([self.dim as u8]);
        for c in &self.coords {
            hasher.update(c.to_bits().to_le_bytes());
        }
        let digest = hasher.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParams(format!(
            "radius must be a positive finite number, got {r}"
        )));
    }
    Ok(())
}

/// Axis coordinates of the m-point lattice spanning `[-r, r]`.
fn grid_axis(m: usize, r: f64) -> Vec<f64> {
    (0..m)
        .map(|i| -r + 2.0 * r * i as f64 / (m - 1) as f64)
        .collect()
}

/// m^3 grid points over `[-r, r]^3`, row-major with x fastest.
fn grid_points(m: usize, r: f64) -> Vec<f64> {
    let axis = grid_axis(m, r);
    let mut coords = Vec::with_capacity(m * m * m * 3);
    for z in &axis {
        for y in &axis {
            for x in &axis {
                coords.extend_from_slice(&[*x, *y, *z]);
            }
        }
    }
    coords
}

/// Rectangular grid basis: k = m^3 points at `-r + 2r*i/(m-1)` per axis,
/// ordered row-major with x fastest. Deterministic; corner points extend to
/// norm `r*sqrt(3)` (the cube is not trimmed to the ball).
pub fn generate_rect_grid(m: usize, r: f64) -> Result<BasisPointSet> {
    if m < 2 {
        return Err(Error::InvalidResolution(m, 2));
    }
    check_radius(r)?;
    Ok(BasisPointSet::from_parts(
        grid_points(m, r),
        3,
        r,
        BasisStrategy::RectGrid,
        0,
    ))
}

/// Ball grid basis: the smallest rectangular grid whose in-ball point count
/// (norm <= r) reaches k, keeping the k in-ball points of smallest norm.
/// Norm ties resolve in row-major grid order. Deterministic.
pub fn generate_ball_grid(k: usize, r: f64) -> Result<BasisPointSet> {
    if k == 0 {
        return Err(Error::InvalidCount("basis size k must be at least 1".into()));
    }
    check_radius(r)?;
    let r_sq = r * r;
    let mut m = 2;
    loop {
        let grid = grid_points(m, r);
        let mut in_ball: Vec<(f64, usize)> = grid
            .chunks_exact(3)
            .enumerate()
            .filter_map(|(idx, p)| {
                let d = norm_sq(p);
                (d <= r_sq).then_some((d, idx))
            })
            .collect();
        if in_ball.len() >= k {
            in_ball.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut coords = Vec::with_capacity(k * 3);
            for &(_, idx) in in_ball.iter().take(k) {
                coords.extend_from_slice(&grid[idx * 3..idx * 3 + 3]);
            }
            return Ok(BasisPointSet::from_parts(
                coords,
                3,
                r,
                BasisStrategy::BallGrid,
                0,
            ));
        }
        m += 1;
    }
}

/// Uniform ball basis: k i.i.d. points uniform in the ball of radius r, via
/// rejection sampling from `[-r, r)^3`. Identical output for identical
/// `(k, r, seed)`.
pub fn generate_uniform_ball(k: usize, r: f64, seed: u64) -> Result<BasisPointSet> {
    if k == 0 {
        return Err(Error::InvalidCount("basis size k must be at least 1".into()));
    }
    check_radius(r)?;
    let r_sq = r * r;
    let mut rng = SeededRng::new(seed);
    let mut coords = Vec::with_capacity(k * 3);
    for _ in 0..k {
        loop {
            let x = rng.range_f64(-r, r);
            let y = rng.range_f64(-r, r);
            let z = rng.range_f64(-r, r);
            if x * x + y * y + z * z <= r_sq {
                coords.extend_from_slice(&[x, y, z]);
                break;
            }
        }
    }
    Ok(BasisPointSet::from_parts(
        coords,
        3,
        r,
        BasisStrategy::UniformBall,
        seed,
    ))
}

/// HCP lattice sites with nearest-neighbor spacing `s`, A-B stacked:
///
/// ```text
/// x = (s/2) * (2i + ((j+k) mod 2))
/// y = (s/2) * sqrt(3) * (j + (k mod 2)/3)
/// z = (s/2) * (2*sqrt(6)/3) * k          for integer i, j, k
/// ```
///
/// Returns every site with norm <= r as `(norm_sq, [x, y, z])`.
fn hcp_sites(spacing: f64, r: f64) -> Vec<(f64, [f64; 3])> {
    let rho = spacing / 2.0;
    let r_sq = r * r;
    let z_step = rho * 2.0 * 6.0f64.sqrt() / 3.0;
    let y_step = rho * 3.0f64.sqrt();
    let k_max = (r / z_step).ceil() as i64 + 1;
    let j_max = (r / y_step).ceil() as i64 + 2;
    let i_max = (r / (2.0 * rho)).ceil() as i64 + 2;
    let mut sites = Vec::new();
    for k in -k_max..=k_max {
        let z = z_step * k as f64;
        let y_off = (k.rem_euclid(2)) as f64 / 3.0;
        for j in -j_max..=j_max {
            let y = y_step * (j as f64 + y_off);
            let x_off = ((j + k).rem_euclid(2)) as f64;
            for i in -i_max..=i_max {
                let x = rho * (2.0 * i as f64 + x_off);
                let d = x * x + y * y + z * z;
                if d <= r_sq {
                    sites.push((d, [x, y, z]));
                }
            }
        }
    }
    sites
}

/// Largest HCP nearest-neighbor spacing that fits at least k lattice sites in
/// the ball of radius r, found by bisection. For `k == 1` the origin alone
/// always fits; the reported spacing is then `2r` by convention.
pub fn hcp_spacing(k: usize, r: f64) -> f64 {
    if k <= 1 {
        return 2.0 * r;
    }
    // Any spacing above r leaves only the origin inside the ball; the lower
    // start comes from the HCP density sqrt(2)/s^3 sites per unit volume.
    let mut hi = 1.01 * r;
    let mut lo = 0.5 * r * (5.92 / k as f64).cbrt();
    while hcp_sites(lo, r).len() < k {
        lo *= 0.5;
    }
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if hcp_sites(mid, r).len() >= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// HCP basis: lattice sites (see [`hcp_spacing`]) at the widest spacing that
/// keeps at least k sites inside the ball, returning the k of smallest norm.
/// Norm ties resolve lexicographically on (x, y, z). Deterministic.
pub fn generate_hcp(k: usize, r: f64) -> Result<BasisPointSet> {
    if k == 0 {
        return Err(Error::InvalidCount("basis size k must be at least 1".into()));
    }
    check_radius(r)?;
    if k == 1 {
        return Ok(BasisPointSet::from_parts(
            vec![0.0, 0.0, 0.0],
            3,
            r,
            BasisStrategy::Hcp,
            0,
        ));
    }
    let spacing = hcp_spacing(k, r);
    let mut sites = hcp_sites(spacing, r);
    sites.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then_with(|| {
            a.1[0]
                .total_cmp(&b.1[0])
                .then(a.1[1].total_cmp(&b.1[1]))
                .then(a.1[2].total_cmp(&b.1[2]))
        })
    });
    debug_assert!(sites.len() >= k);
    let mut coords = Vec::with_capacity(k * 3);
    for (_, p) in sites.iter().take(k) {
        coords.extend_from_slice(p);
    }
    Ok(BasisPointSet::from_parts(
        coords,
        3,
        r,
        BasisStrategy::Hcp,
        0,
    ))
}

/// Minimal pairwise distance of a basis; `None` for fewer than two points.
pub fn min_pairwise_distance(basis: &BasisPointSet) -> Option<f64> {
    let k = basis.len();
    if k < 2 {
        return None;
    }
    let mut best = f64::INFINITY;
    for a in 0..k {
        for b in (a + 1)..k {
            best = best.min(dist_sq(basis.point(a), basis.point(b)));
        }
    }
    Some(best.sqrt())
}
