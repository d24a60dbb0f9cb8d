//! Synthetic surface shapes for tests and desk-scale benchmarks.
//!
//! Each shape samples `n` points uniformly (by area) over its surface,
//! seeded and bit-reproducible. The two-sided sheet is a pair of close
//! parallel rectangles — a stand-in for geometry with internal folds that
//! external projections cannot see.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use std::f64::consts::PI;

/// Parametric surface shapes with uniform area sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SynthShape {
    /// Sphere of the given radius, centered at the origin.
    Sphere { radius: f64 },
    /// Torus around the z axis: ring of radius `major`, tube radius `minor`.
    Torus { major: f64, minor: f64 },
    /// Axis-aligned box surface with the given full extents, centered.
    Box { extents: [f64; 3] },
    /// Two parallel `width x depth` rectangles at `z = +-gap/2`.
    TwoSidedSheet { width: f64, depth: f64, gap: f64 },
    /// Closed cylinder around the z axis: lateral wall plus both caps.
    Cylinder { radius: f64, height: f64 },
}

impl SynthShape {
    /// Shape kind name as used by the CLI.
    pub fn kind_name(&self) -> &'static str {
        match self {
            SynthShape::Sphere { .. } => "sphere",
            SynthShape::Torus { .. } => "torus",
            SynthShape::Box { .. } => "box",
            SynthShape::TwoSidedSheet { .. } => "sheet",
            SynthShape::Cylinder { .. } => "cylinder",
        }
    }

    /// Default parameters per kind name.
    pub fn default_for(kind: &str) -> Option<Self> {
        match kind {
            "sphere" => Some(SynthShape::Sphere { radius: 1.0 }),
            "torus" => Some(SynthShape::Torus {
                major: 1.0,
                minor: 0.3,
            }),
            "box" => Some(SynthShape::Box {
                extents: [1.0, 1.0, 1.0],
            }),
            "sheet" => Some(SynthShape::TwoSidedSheet {
                width: 1.2,
                depth: 1.2,
                gap: 0.4,
            }),
            "cylinder" => Some(SynthShape::Cylinder {
                radius: 0.5,
                height: 1.4,
            }),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        match *self {
            SynthShape::Sphere { radius } => {
                if !(radius > 0.0) {
                    return bad(format!("sphere radius must be positive, got {radius}"));
                }
            }
            SynthShape::Torus { major, minor } => {
                if !(major > 0.0) || !(minor > 0.0) {
                    return bad("torus radii must be positive".into());
                }
                if minor >= major {
                    return bad(format!(
                        "torus minor radius {minor} must be below the major radius {major}"
                    ));
                }
            }
            SynthShape::Box { extents } => {
                if extents.iter().any(|e| !(*e > 0.0)) {
                    return bad("box extents must be positive".into());
                }
            }
            SynthShape::TwoSidedSheet { width, depth, gap } => {
                if !(width > 0.0) || !(depth > 0.0) || !(gap > 0.0) {
                    return bad("sheet width, depth and gap must be positive".into());
                }
            }
            SynthShape::Cylinder { radius, height } => {
                if !(radius > 0.0) || !(height > 0.0) {
                    return bad("cylinder radius and height must be positive".into());
                }
            }
        }
        Ok(())
    }

    /// Sample `n` points uniformly over the surface.
    pub fn sample(&self, n: usize, seed: u64) -> Result<PointCloud> {
        if n == 0 {
            return Err(Error::InvalidCount("sample size must be at least 1".into()));
        }
        self.validate()?;
        let mut rng = SeededRng::new(seed);
        let mut coords = Vec::with_capacity(n * 3);
        for _ in 0..n {
            let p = match *self {
                SynthShape::Sphere { radius } => sample_sphere(&mut rng, radius),
                SynthShape::Torus { major, minor } => sample_torus(&mut rng, major, minor),
                SynthShape::Box { extents } => sample_box(&mut rng, extents),
                SynthShape::TwoSidedSheet { width, depth, gap } => {
                    sample_sheet(&mut rng, width, depth, gap)
                }
                SynthShape::Cylinder { radius, height } => {
                    sample_cylinder(&mut rng, radius, height)
                }
            };
            coords.extend_from_slice(&p);
        }
        PointCloud::new(coords, 3)
    }
}

/// Archimedes projection: z uniform, angle uniform.
fn sample_sphere(rng: &mut SeededRng, r: f64) -> [f64; 3] {
    let z = rng.range_f64(-1.0, 1.0);
    let phi = rng.range_f64(0.0, 2.0 * PI);
    let s = (1.0 - z * z).max(0.0).sqrt();
    [r * s * phi.cos(), r * s * phi.sin(), r * z]
}

/// The surface element scales with `major + minor*cos(theta)`; rejection on
/// the tube angle keeps the sampling uniform by area.
fn sample_torus(rng: &mut SeededRng, major: f64, minor: f64) -> [f64; 3] {
    let theta = loop {
        let theta = rng.range_f64(0.0, 2.0 * PI);
        let w = rng.unit_f64();
        if w * (major + minor) <= major + minor * theta.cos() {
            break theta;
        }
    };
    let phi = rng.range_f64(0.0, 2.0 * PI);
    let ring = major + minor * theta.cos();
    [ring * phi.cos(), ring * phi.sin(), minor * theta.sin()]
}

fn sample_box(rng: &mut SeededRng, extents: [f64; 3]) -> [f64; 3] {
    let [ex, ey, ez] = extents;
    // face pair areas per axis
    let areas = [ey * ez, ex * ez, ex * ey];
    let total = 2.0 * (areas[0] + areas[1] + areas[2]);
    let mut target = rng.unit_f64() * total;
    let mut axis = 2;
    let mut side = 1.0;
    'pick: for a in 0..3 {
        for s in [-1.0, 1.0] {
            if target < areas[a] {
                axis = a;
                side = s;
                break 'pick;
            }
            target -= areas[a];
        }
    }
    let mut p = [
        rng.range_f64(-ex / 2.0, ex / 2.0),
        rng.range_f64(-ey / 2.0, ey / 2.0),
        rng.range_f64(-ez / 2.0, ez / 2.0),
    ];
    p[axis] = side * extents[axis] / 2.0;
    p
}

fn sample_sheet(rng: &mut SeededRng, width: f64, depth: f64, gap: f64) -> [f64; 3] {
    let side = if rng.unit_f64() < 0.5 { -1.0 } else { 1.0 };
    [
        rng.range_f64(-width / 2.0, width / 2.0),
        rng.range_f64(-depth / 2.0, depth / 2.0),
        side * gap / 2.0,
    ]
}

fn sample_cylinder(rng: &mut SeededRng, radius: f64, height: f64) -> [f64; 3] {
    let lateral = 2.0 * PI * radius * height;
    let cap = PI * radius * radius;
    let target = rng.unit_f64() * (lateral + 2.0 * cap);
    if target < lateral {
        let phi = rng.range_f64(0.0, 2.0 * PI);
        let z = rng.range_f64(-height / 2.0, height / 2.0);
        [radius * phi.cos(), radius * phi.sin(), z]
    } else {
        let side = if target < lateral + cap { -1.0 } else { 1.0 };
        let rho = radius * rng.unit_f64().sqrt();
        let phi = rng.range_f64(0.0, 2.0 * PI);
        [rho * phi.cos(), rho * phi.sin(), side * height / 2.0]
    }
}
