//! Data in and out: OFF meshes, surface sampling, synthetic shapes, and the
//! toolkit's XYZ and BPK file formats.

mod bpk;
mod mesh;
mod off;
mod synth;
mod xyz;

pub use bpk::{
    read_bpk, read_bpk_file, write_bpk, write_bpk_file, BpkRecord, BPK_VERSION,
};
pub use mesh::TriangleMesh;
pub use off::parse_off;
pub use synth::SynthShape;
pub use xyz::{read_xyz, read_xyz_file, write_xyz, write_xyz_file};
