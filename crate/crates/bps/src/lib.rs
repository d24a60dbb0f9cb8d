//! Basis point set (BPS) encoding for 3D point clouds.
//!
//! A point cloud of arbitrary cardinality is reduced to a fixed-length
//! feature vector by measuring, for every point of a fixed *basis point set*,
//! the distance (or full delta vector) to the nearest cloud point. The crate
//! bundles:
//!
//! - unit-ball normalization and the core cloud types ([`cloud`]),
//! - four basis constructions: rectangular grid, ball-trimmed grid, uniform
//!   ball sampling and hexagonal close packing ([`basis`]),
//! - an exact ball-tree nearest-neighbor index with a brute-force oracle
//!   ([`nnsearch`]),
//! - BPS feature encoders plus occupancy-grid and truncated-distance-field
//!   baselines ([`encode`], [`voxel`]),
//! - decoders and the bidirectional Chamfer distance ([`reconstruct`]),
//! - OFF/XYZ/BPK file formats, mesh surface sampling and synthetic shapes
//!   ([`ingest`]),
//! - reconstruction-vs-encoding-length sweeps, throughput measurements and a
//!   1-NN feature-quality check ([`bench`]).
//!
//! All randomized operations are keyed by explicit 64-bit seeds and reproduce
//! bit-identically across runs and worker counts.

pub mod basis;
pub mod bench;
pub mod cloud;
pub mod encode;
mod error;
pub mod ingest;
pub mod nnsearch;
pub mod reconstruct;
pub mod rng;
mod vecmath;
pub mod voxel;

pub use basis::{
    generate_ball_grid, generate_hcp, generate_rect_grid, generate_uniform_ball, BasisPointSet,
    BasisStrategy,
};
pub use cloud::{denormalize, normalize, NormalizationTransform, PointCloud};
pub use encode::{
    attach_payload, encode_bps_delta, encode_bps_distance, encode_occupancy, encode_tdf,
    AttributeTable, BpsEncoder, BpsEncoding, FeatureKind,
};
pub use error::{Error, Result};
pub use nnsearch::{brute_force_nearest, NearestResult, SpatialIndex};
pub use reconstruct::{
    chamfer, chamfer_brute_force, decode_delta, decode_occupancy, decode_subsample,
};
pub use voxel::{GridKind, VoxelGrid};
