//! BPK: the toolkit's little-endian binary container.
//!
//! ```text
//! "BPSK"  magic, 4 bytes
//! u16     format version (currently 1)
//! u8      record kind: 1 basis | 2 distance encoding | 3 delta encoding | 4 voxel grid
//! ...     kind-specific header (see below)
//! ...     packed payload
//! u32     CRC-32 (IEEE) over every preceding byte
//! ```
//!
//! Kind-specific layouts:
//!
//! - basis: `strategy u8, seed u64, radius f64, k u32, dim u8`, payload
//!   `k*dim` coordinates as f64. Basis sets round-trip exactly so a stored
//!   basis reproduces bit-identical encodings.
//! - distance encoding: `basis_id u64, k u32, dim u8`, payload `k` f32.
//! - delta encoding: `basis_id u64, k u32, dim u8`, payload `k*dim` f32.
//! - voxel grid: `grid kind u8 (0 occupancy | 1 tdf), resolution u32`, then
//!   `truncation f64` for TDF grids, payload `m^3` f32.
//!
//! Encoding and grid payloads are 32-bit floats — the representation a
//! description length of "N floating point values" accounts for. The
//! in-memory argmin indices and exact nearest-point copies are not
//! serialized; a reloaded delta encoding decodes by float addition at f32
//! precision.

use crate::basis::{BasisPointSet, BasisStrategy};
use crate::encode::{BpsEncoding, FeatureKind};
use crate::error::{Error, Result};
use crate::voxel::{GridKind, VoxelGrid};
use std::io::{Read, Write};
use std::path::Path;

pub const BPK_VERSION: u16 = 1;
const MAGIC: [u8; 4] = *b"BPSK";

const KIND_BASIS: u8 = 1;
const KIND_DISTANCE: u8 = 2;
const KIND_DELTA: u8 = 3;
const KIND_GRID: u8 = 4;

/// One deserialized BPK record.
#[derive(Debug, Clone, PartialEq)]
pub enum BpkRecord {
    Basis(BasisPointSet),
    Encoding(BpsEncoding),
    Grid(VoxelGrid),
}

impl BpkRecord {
    pub fn into_basis(self) -> Result<BasisPointSet> {
        match self {
            BpkRecord::Basis(b) => Ok(b),
            _ => Err(Error::KindMismatch("BPK record is not a basis")),
        }
    }

    pub fn into_encoding(self) -> Result<BpsEncoding> {
        match self {
            BpkRecord::Encoding(e) => Ok(e),
            _ => Err(Error::KindMismatch("BPK record is not an encoding")),
        }
    }

    pub fn into_grid(self) -> Result<VoxelGrid> {
        match self {
            BpkRecord::Grid(g) => Ok(g),
            _ => Err(Error::KindMismatch("BPK record is not a voxel grid")),
        }
    }
}

impl From<BasisPointSet> for BpkRecord {
    fn from(b: BasisPointSet) -> Self {
        BpkRecord::Basis(b)
    }
}

impl From<BpsEncoding> for BpkRecord {
    fn from(e: BpsEncoding) -> Self {
        BpkRecord::Encoding(e)
    }
}

impl From<VoxelGrid> for BpkRecord {
    fn from(g: VoxelGrid) -> Self {
        BpkRecord::Grid(g)
    }
}

fn encode_record(record: &BpkRecord) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&BPK_VERSION.to_le_bytes());
    match record {
        BpkRecord::Basis(basis) => {
            buf.push(KIND_BASIS);
            buf.push(basis.strategy().tag());
            buf.extend_from_slice(&basis.seed().to_le_bytes());
            buf.extend_from_slice(&basis.radius().to_le_bytes());
            buf.extend_from_slice(&(basis.len() as u32).to_le_bytes());
            buf.push(basis.dim() as u8);
            for c in basis.coords() {
                buf.extend_from_slice(&c.to_le_bytes());
            }
        }
        BpkRecord::Encoding(enc) => {
            buf.push(match enc.kind() {
                FeatureKind::Distance => KIND_DISTANCE,
                FeatureKind::Delta => KIND_DELTA,
            });
            buf.extend_from_slice(&enc.basis_id().to_le_bytes());
            buf.extend_from_slice(&(enc.len() as u32).to_le_bytes());
            buf.push(enc.dim() as u8);
            for v in enc.values() {
                buf.extend_from_slice(&(*v as f32).to_le_bytes());
            }
        }
        BpkRecord::Grid(grid) => {
            buf.push(KIND_GRID);
            match grid.kind() {
                GridKind::Occupancy => {
                    buf.push(0);
                    buf.extend_from_slice(&(grid.resolution() as u32).to_le_bytes());
                }
                GridKind::Tdf { truncation } => {
                    buf.push(1);
                    buf.extend_from_slice(&(grid.resolution() as u32).to_le_bytes());
                    buf.extend_from_slice(&truncation.to_le_bytes());
                }
            }
            for v in grid.cells() {
                buf.extend_from_slice(&(*v as f32).to_le_bytes());
            }
        }
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

/// Serialize one record to a BPK stream.
pub fn write_bpk(mut output: impl Write, record: &BpkRecord) -> Result<()> {
    output.write_all(&encode_record(record))?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::TruncatedFile {
                line: 0,
                msg: format!(
                    "needed {n} bytes for {what} at offset {}, only {} left",
                    self.pos,
                    self.bytes.len() - self.pos
                ),
            });
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f32_array(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let raw = self.take(count * 4, what)?;
        Ok(raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
            .collect())
    }

    fn f64_array(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let raw = self.take(count * 8, what)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::MalformedLine {
                line: 0,
                msg: format!(
                    "{} unexpected trailing bytes in BPK record",
                    self.bytes.len() - self.pos
                ),
            });
        }
        Ok(())
    }
}

/// Deserialize one BPK record from a byte stream.
pub fn read_bpk(mut input: impl Read) -> Result<BpkRecord> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < MAGIC.len() + 2 + 1 + 4 {
        return Err(Error::TruncatedFile {
            line: 0,
            msg: format!("stream is only {} bytes long", bytes.len()),
        });
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 4);
    let stored_crc = u32::from_le_bytes(trailer.try_into().unwrap());
    if crc32fast::hash(body) != stored_crc {
        return Err(Error::ChecksumMismatch);
    }

    let mut cur = Cursor {
        bytes: body,
        pos: 0,
    };
    if cur.take(4, "magic")? != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = cur.u16("version")?;
    if version != BPK_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let kind = cur.u8("record kind")?;
    let record = match kind {
        KIND_BASIS => {
            let strategy_tag = cur.u8("strategy")?;
            let strategy = BasisStrategy::from_tag(strategy_tag).ok_or_else(|| {
                Error::MalformedLine {
                    line: 0,
                    msg: format!("unknown basis strategy tag {strategy_tag}"),
                }
            })?;
            let seed = cur.u64("seed")?;
            let radius = cur.f64("radius")?;
            let k = cur.u32("basis size")? as usize;
            let dim = cur.u8("dimension")? as usize;
            if k == 0 || dim == 0 {
                return Err(Error::MalformedLine {
                    line: 0,
                    msg: "basis record with zero size or dimension".into(),
                });
            }
            let coords = cur.f64_array(k * dim, "basis coordinates")?;
            BpkRecord::Basis(BasisPointSet::from_parts(coords, dim, radius, strategy, seed))
        }
        KIND_DISTANCE | KIND_DELTA => {
            let basis_id = cur.u64("basis id")?;
            let k = cur.u32("feature count")? as usize;
            let dim = cur.u8("dimension")? as usize;
            if k == 0 || dim == 0 {
                return Err(Error::MalformedLine {
                    line: 0,
                    msg: "encoding record with zero size or dimension".into(),
                });
            }
            let (feature_kind, count) = if kind == KIND_DISTANCE {
                (FeatureKind::Distance, k)
            } else {
                (FeatureKind::Delta, k * dim)
            };
            let values = cur.f32_array(count, "feature values")?;
            BpkRecord::Encoding(BpsEncoding::from_parts(
                feature_kind,
                dim,
                values,
                None,
                None,
                basis_id,
                None,
            ))
        }
        KIND_GRID => {
            let grid_tag = cur.u8("grid kind")?;
            let resolution = cur.u32("resolution")? as usize;
            if resolution == 0 {
                return Err(Error::MalformedLine {
                    line: 0,
                    msg: "grid record with zero resolution".into(),
                });
            }
            let grid_kind = match grid_tag {
                0 => GridKind::Occupancy,
                1 => {
                    let truncation = cur.f64("truncation")?;
                    if !(truncation > 0.0) {
                        return Err(Error::InvalidTruncation(truncation));
                    }
                    GridKind::Tdf { truncation }
                }
                other => {
                    return Err(Error::MalformedLine {
                        line: 0,
                        msg: format!("unknown grid kind tag {other}"),
                    })
                }
            };
            let mut cells =
                cur.f32_array(resolution * resolution * resolution, "grid cells")?;
            if let GridKind::Tdf { truncation } = grid_kind {
                // f32 rounding may nudge a cell past the f64 truncation bound
                for c in &mut cells {
                    *c = c.clamp(0.0, truncation);
                }
            }
            BpkRecord::Grid(VoxelGrid::from_parts(resolution, cells, grid_kind))
        }
        other => {
            return Err(Error::MalformedLine {
                line: 0,
                msg: format!("unknown BPK record kind {other}"),
            })
        }
    };
    cur.finish()?;
    Ok(record)
}

pub fn write_bpk_file(path: impl AsRef<Path>, record: &BpkRecord) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_bpk(&mut file, record)
}

pub fn read_bpk_file(path: impl AsRef<Path>) -> Result<BpkRecord> {
    read_bpk(std::fs::File::open(path)?)
}
