//! Desk-scale benchmark harness.
//!
//! Three experiments:
//!
//! - [`run_reconstruction_sweep`]: encode/decode/score every cloud under a
//!   shared float budget N. The raw baseline keeps N/3 points, the occupancy
//!   grid spends N on a `floor(N^(1/3))^3` lattice, and each BPS delta
//!   encoder spends it on k = N/3 basis points — one shared basis per
//!   (strategy, k) across the whole dataset.
//! - [`run_throughput`]: ball-tree build and query wall times over a grid of
//!   (n, k), medians and interquartile ranges over repetitions.
//! - [`knn_classify`]: 1-nearest-neighbor prediction over distance-kind
//!   feature vectors, an end-to-end check that the features separate shape
//!   classes.
//!
//! Chamfer values and predictions are bit-reproducible for a fixed seed,
//! independent of the worker count; timing columns are measurements and are
//! exempt.

use crate::basis::{
    generate_ball_grid, generate_hcp, generate_rect_grid, generate_uniform_ball, BasisPointSet,
    BasisStrategy,
};
use crate::cloud::{normalize, PointCloud};
use crate::encode::{BpsEncoder, BpsEncoding, FeatureKind};
use crate::error::{Error, Result};
use crate::ingest::SynthShape;
use crate::nnsearch::SpatialIndex;
use crate::reconstruct::{chamfer, decode_delta, decode_occupancy, decode_subsample};
use crate::rng::{derive_seed, SeededRng};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

/// Run a closure inside a dedicated pool of `workers` threads, or on the
/// ambient pool when `workers` is 0.
pub fn with_worker_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Smallest float budget the sweep accepts: a 2^3 occupancy grid.
pub const MIN_SWEEP_BUDGET: usize = 24;

/// One sweep cell: a (shape, encoder, budget) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub shape_id: String,
    pub encoder: String,
    pub n_floats: usize,
    /// Chamfer distance against the original cloud; `None` when the cell
    /// failed (see `error`).
    pub chamfer: Option<f64>,
    pub wall_time_ms: f64,
    pub error: Option<String>,
}

/// All rows of one reconstruction sweep.
#[derive(Debug, Clone, Default)]
pub struct ReconstructionReport {
    pub rows: Vec<SweepRow>,
}

impl ReconstructionReport {
    /// Median Chamfer over all shapes for one (encoder, budget) cell;
    /// `None` if every row failed.
    pub fn median_chamfer(&self, encoder: &str, n_floats: usize) -> Option<f64> {
        let mut values: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.encoder == encoder && r.n_floats == n_floats)
            .filter_map(|r| r.chamfer)
            .collect();
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        Some(median_of_sorted(&values))
    }

    /// Encoder labels present in the report, in first-seen order.
    pub fn encoders(&self) -> Vec<String> {
        let mut seen = Vec::new();
        for row in &self.rows {
            if !seen.contains(&row.encoder) {
                seen.push(row.encoder.clone());
            }
        }
        seen
    }

    /// RFC-4180 CSV: header plus one line per row.
    pub fn write_csv(&self, output: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(output);
        w.write_record([
            "shape_id",
            "encoder",
            "n_floats",
            "chamfer",
            "wall_time_ms",
            "status",
            "error",
        ])?;
        for row in &self.rows {
            w.write_record([
                row.shape_id.as_str(),
                row.encoder.as_str(),
                &row.n_floats.to_string(),
                &row.chamfer.map(|c| c.to_string()).unwrap_or_default(),
                &format!("{:.3}", row.wall_time_ms),
                if row.chamfer.is_some() { "ok" } else { "failed" },
                row.error.as_deref().unwrap_or(""),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sweep parameters.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Float budgets N; every value must be at least [`MIN_SWEEP_BUDGET`].
    pub n_values: Vec<usize>,
    /// BPS strategies to run as `bps-delta:<name>` encoders.
    pub strategies: Vec<BasisStrategy>,
    pub seed: u64,
    /// 0 = use the ambient rayon pool.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            // cube-friendly budgets: N/3 is a perfect cube up to 10125, so
            // the rect-grid encoder participates at every point but the last
            n_values: vec![24, 81, 192, 375, 648, 1029, 3000, 10125, 30000],
            strategies: vec![
                BasisStrategy::RectGrid,
                BasisStrategy::BallGrid,
                BasisStrategy::UniformBall,
                BasisStrategy::Hcp,
            ],
            seed: 0,
            workers: 0,
        }
    }
}

/// Encoder label used in report rows.
pub fn encoder_label(strategy: BasisStrategy) -> String {
    format!("bps-delta:{}", strategy.name())
}

pub const RAW_ENCODER: &str = "raw-subsample";
pub const OCCUPANCY_ENCODER: &str = "occupancy";

fn cube_root_floor(n: usize) -> usize {
    let mut m = (n as f64).cbrt().round() as usize;
    while m.pow(3) > n {
        m -= 1;
    }
    while (m + 1).pow(3) <= n {
        m += 1;
    }
    m
}

/// Build the shared basis for one (strategy, k) cell. Uniform-ball bases are
/// keyed by a seed derived from the master seed, the strategy and k; grid
/// and HCP bases are deterministic.
fn sweep_basis(strategy: BasisStrategy, k: usize, master_seed: u64) -> Result<BasisPointSet> {
    match strategy {
        BasisStrategy::RectGrid => {
            let m = cube_root_floor(k);
            if m * m * m != k {
                return Err(Error::InvalidCount(format!(
                    "rect-grid basis needs a cubic point count, got {k}"
                )));
            }
            generate_rect_grid(m, 1.0)
        }
        BasisStrategy::BallGrid => generate_ball_grid(k, 1.0),
        BasisStrategy::UniformBall => {
            generate_uniform_ball(k, 1.0, derive_seed(master_seed, &[10, strategy.tag() as u64, k as u64]))
        }
        BasisStrategy::Hcp => generate_hcp(k, 1.0),
    }
}

enum SweepEncoder<'a> {
    Raw,
    Occupancy,
    BpsDelta(BasisStrategy, &'a Result<BasisPointSet>),
}

fn eval_cell(
    shape_id: &str,
    shape_idx: usize,
    cloud: &PointCloud,
    encoder: &SweepEncoder,
    n_floats: usize,
    master_seed: u64,
) -> SweepRow {
    let start = Instant::now();
    let (label, outcome) = match encoder {
        SweepEncoder::Raw => {
            let n_keep = (n_floats / 3).min(cloud.len()).max(1);
            let seed = derive_seed(master_seed, &[20, shape_idx as u64, n_floats as u64]);
            let result = decode_subsample(cloud, n_keep, seed)
                .and_then(|sub| chamfer(cloud, &sub));
            (RAW_ENCODER.to_string(), result)
        }
        SweepEncoder::Occupancy => {
            let m = cube_root_floor(n_floats);
            let result = crate::encode::encode_occupancy(cloud, m)
                .and_then(|grid| decode_occupancy(&grid))
                .and_then(|rec| chamfer(cloud, &rec));
            (OCCUPANCY_ENCODER.to_string(), result)
        }
        SweepEncoder::BpsDelta(strategy, basis) => {
            let result = match basis {
                Ok(basis) => BpsEncoder::new(basis)
                    .delta(cloud)
                    .and_then(|enc| decode_delta(&enc, basis))
                    .and_then(|rec| chamfer(cloud, &rec)),
                Err(e) => Err(Error::InvalidCount(e.to_string())),
            };
            (encoder_label(*strategy), result)
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(chamfer) => SweepRow {
            shape_id: shape_id.to_string(),
            encoder: label,
            n_floats,
            chamfer: Some(chamfer),
            wall_time_ms,
            error: None,
        },
        Err(e) => SweepRow {
            shape_id: shape_id.to_string(),
            encoder: label,
            n_floats,
            chamfer: None,
            wall_time_ms,
            error: Some(e.to_string()),
        },
    }
}

/// Encode, decode and score every (shape, encoder, N) combination.
///
/// Encoder failures mark their row as failed without aborting the sweep.
/// Chamfer columns are bit-reproducible for a fixed seed at any worker
/// count.
pub fn run_reconstruction_sweep(
    dataset: &[(String, PointCloud)],
    cfg: &SweepConfig,
) -> Result<ReconstructionReport> {
    for &n in &cfg.n_values {
        if n < MIN_SWEEP_BUDGET {
            return Err(Error::InvalidParams(format!(
                "budget {n} is below the minimum {MIN_SWEEP_BUDGET}"
            )));
        }
    }
    // one shared basis per (strategy, k), as a fixed basis must serve the
    // whole dataset
    let mut bases: HashMap<(BasisStrategy, usize), Result<BasisPointSet>> = HashMap::new();
    for &n in &cfg.n_values {
        let k = n / 3;
        for &strategy in &cfg.strategies {
            bases
                .entry((strategy, k))
                .or_insert_with(|| sweep_basis(strategy, k, cfg.seed));
        }
    }

    let mut cells: Vec<(usize, &(String, PointCloud), usize, SweepEncoder)> = Vec::new();
    for (shape_idx, entry) in dataset.iter().enumerate() {
        for &n in &cfg.n_values {
            cells.push((shape_idx, entry, n, SweepEncoder::Raw));
            cells.push((shape_idx, entry, n, SweepEncoder::Occupancy));
            for &strategy in &cfg.strategies {
                let basis = bases.get(&(strategy, n / 3)).expect("prebuilt basis");
                cells.push((shape_idx, entry, n, SweepEncoder::BpsDelta(strategy, basis)));
            }
        }
    }

    let seed = cfg.seed;
    let rows = with_worker_pool(cfg.workers, move || {
        cells
            .par_iter()
            .map(|(shape_idx, (shape_id, cloud), n, encoder)| {
                eval_cell(shape_id, *shape_idx, cloud, encoder, *n, seed)
            })
            .collect::<Vec<_>>()
    })?;
    Ok(ReconstructionReport { rows })
}

/// One throughput configuration: medians and nearest-rank interquartile
/// ranges over all repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputRow {
    pub n: usize,
    pub k: usize,
    pub strategy: String,
    pub build_ms: f64,
    pub build_iqr_ms: f64,
    pub query_ms: f64,
    pub query_iqr_ms: f64,
    /// Median of per-repetition build + query totals.
    pub total_ms: f64,
    pub worker_count: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ThroughputReport {
    pub rows: Vec<ThroughputRow>,
}

impl ThroughputReport {
    pub fn row(&self, n: usize, k: usize) -> Option<&ThroughputRow> {
        self.rows.iter().find(|r| r.n == n && r.k == k)
    }

    pub fn write_csv(&self, output: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(output);
        w.write_record([
            "n",
            "k",
            "strategy",
            "build_ms",
            "build_iqr_ms",
            "query_ms",
            "query_iqr_ms",
            "total_ms",
            "worker_count",
        ])?;
        for r in &self.rows {
            w.write_record([
                &r.n.to_string(),
                &r.k.to_string(),
                &r.strategy,
                &format!("{:.4}", r.build_ms),
                &format!("{:.4}", r.build_iqr_ms),
                &format!("{:.4}", r.query_ms),
                &format!("{:.4}", r.query_iqr_ms),
                &format!("{:.4}", r.total_ms),
                &r.worker_count.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Throughput measurement parameters.
#[derive(Debug, Clone)]
pub struct ThroughputConfig {
    pub n_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub strategy: BasisStrategy,
    /// At least 3; repetitions interleave across configurations so clock
    /// drift hits every configuration equally.
    pub repetitions: usize,
    pub seed: u64,
    /// Threads for the query phase; 1 pins the scaling measurements.
    pub workers: usize,
}

impl Default for ThroughputConfig {
    fn default() -> Self {
        Self {
            n_values: vec![1_000, 10_000, 100_000],
            k_values: vec![512, 1_024, 2_048],
            strategy: BasisStrategy::UniformBall,
            repetitions: 11,
            seed: 0,
            workers: 1,
        }
    }
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    median_of_sorted(&v)
}

/// Nearest-rank interquartile range.
fn iqr(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q1 = v[(v.len() - 1) / 4];
    let q3 = v[(3 * (v.len() - 1)) / 4];
    q3 - q1
}

fn uniform_ball_cloud(n: usize, seed: u64) -> PointCloud {
    let mut rng = SeededRng::new(seed);
    let mut coords = Vec::with_capacity(n * 3);
    while coords.len() < n * 3 {
        let x = rng.range_f64(-1.0, 1.0);
        let y = rng.range_f64(-1.0, 1.0);
        let z = rng.range_f64(-1.0, 1.0);
        if x * x + y * y + z * z <= 1.0 {
            coords.extend_from_slice(&[x, y, z]);
        }
    }
    PointCloud::new(coords, 3).expect("finite coordinates")
}

/// Measure ball-tree build and query times over the (n, k) grid.
///
/// Every repetition times each configuration once, so slow drift affects all
/// configurations alike; reported values are medians over repetitions.
pub fn run_throughput(cfg: &ThroughputConfig) -> Result<ThroughputReport> {
    if cfg.repetitions < 3 {
        return Err(Error::InvalidParams(
            "throughput needs at least 3 repetitions".into(),
        ));
    }
    let clouds: Vec<(usize, PointCloud)> = cfg
        .n_values
        .iter()
        .map(|&n| (n, uniform_ball_cloud(n, derive_seed(cfg.seed, &[30, n as u64]))))
        .collect();
    let bases: Vec<(usize, BasisPointSet)> = cfg
        .k_values
        .iter()
        .map(|&k| Ok((k, sweep_basis(cfg.strategy, k, cfg.seed)?)))
        .collect::<Result<_>>()?;

    let mut build_times: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    let mut query_times: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    let mut totals: HashMap<(usize, usize), Vec<f64>> = HashMap::new();

    with_worker_pool(cfg.workers.max(1), || {
        for _rep in 0..cfg.repetitions {
            for (n, cloud) in &clouds {
                for (k, basis) in &bases {
                    let t0 = Instant::now();
                    let index = SpatialIndex::build(cloud).expect("non-empty cloud");
                    let build = t0.elapsed().as_secs_f64() * 1e3;

                    let t1 = Instant::now();
                    let acc: f64 = if cfg.workers == 1 {
                        let mut acc = 0.0;
                        for j in 0..basis.len() {
                            acc += index.nearest(basis.point(j)).distance;
                        }
                        acc
                    } else {
                        (0..basis.len())
                            .into_par_iter()
                            .map(|j| index.nearest(basis.point(j)).distance)
                            .sum()
                    };
                    let query = t1.elapsed().as_secs_f64() * 1e3;
                    std::hint::black_box(acc);

                    build_times.entry((*n, *k)).or_default().push(build);
                    query_times.entry((*n, *k)).or_default().push(query);
                    totals.entry((*n, *k)).or_default().push(build + query);
                }
            }
        }
    })?;

    let mut rows = Vec::new();
    for (n, _) in &clouds {
        for (k, _) in &bases {
            let b = &build_times[&(*n, *k)];
            let q = &query_times[&(*n, *k)];
            rows.push(ThroughputRow {
                n: *n,
                k: *k,
                strategy: cfg.strategy.name().to_string(),
                build_ms: median(b),
                build_iqr_ms: iqr(b),
                query_ms: median(q),
                query_iqr_ms: iqr(q),
                total_ms: median(&totals[&(*n, *k)]),
                worker_count: cfg.workers.max(1),
            });
        }
    }
    Ok(ThroughputReport { rows })
}

/// 1-nearest-neighbor classification over distance-kind feature vectors.
///
/// All encodings must come from one basis; ties resolve to the smallest
/// training index.
pub fn knn_classify<L: Clone + Send + Sync>(
    train: &[(BpsEncoding, L)],
    test: &[BpsEncoding],
) -> Result<Vec<L>> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let basis_id = train[0].0.basis_id();
    for (enc, _) in train {
        if enc.kind() != FeatureKind::Distance {
            return Err(Error::KindMismatch(
                "1-NN classification needs distance-kind encodings",
            ));
        }
        if enc.basis_id() != basis_id {
            return Err(Error::BasisMismatch);
        }
    }
    for enc in test {
        if enc.kind() != FeatureKind::Distance {
            return Err(Error::KindMismatch(
                "1-NN classification needs distance-kind encodings",
            ));
        }
        if enc.basis_id() != basis_id {
            return Err(Error::BasisMismatch);
        }
    }
    let labels: Vec<L> = test
        .par_iter()
        .map(|probe| {
            let p = probe.feature_vector();
            let mut best = f64::INFINITY;
            let mut best_idx = 0usize;
            for (i, (enc, _)) in train.iter().enumerate() {
                let mut d2 = 0.0;
                for (a, b) in p.iter().zip(enc.feature_vector()) {
                    let d = a - b;
                    d2 += d * d;
                }
                if d2 < best {
                    best = d2;
                    best_idx = i;
                }
            }
            train[best_idx].1.clone()
        })
        .collect();
    Ok(labels)
}

/// Synthetic-suite parameters.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub instances_per_kind: usize,
    pub points: usize,
    pub seed: u64,
}

/// Shape kinds bundled in the synthetic suite, in suite order.
pub const SUITE_KINDS: [&str; 5] = ["sphere", "torus", "box", "sheet", "cylinder"];

/// Log-uniform draw in `[lo, hi]`; part cross-sections in CAD corpora skew
/// toward the thin end.
fn log_range(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    (rng.range_f64(lo.ln(), hi.ln())).exp()
}

/// CAD-flavored parameter ranges: thin rings, planks and rods next to the
/// sphere and the folded sheet, echoing the furniture-dominated geometry of
/// mesh corpora (legs, panels, rims) rather than chunky solids.
fn suite_shape(kind_idx: usize, rng: &mut SeededRng) -> SynthShape {
    match SUITE_KINDS[kind_idx] {
        "sphere" => SynthShape::Sphere { radius: 1.0 },
        "torus" => SynthShape::Torus {
            major: 1.0,
            minor: log_range(rng, 0.08, 0.2),
        },
        "box" => SynthShape::Box {
            extents: [
                rng.range_f64(1.2, 1.6),
                log_range(rng, 0.12, 0.45),
                log_range(rng, 0.12, 0.45),
            ],
        },
        "sheet" => SynthShape::TwoSidedSheet {
            width: rng.range_f64(0.8, 1.6),
            depth: rng.range_f64(0.8, 1.6),
            gap: rng.range_f64(0.15, 0.5),
        },
        "cylinder" => SynthShape::Cylinder {
            radius: log_range(rng, 0.08, 0.25),
            height: rng.range_f64(1.2, 2.0),
        },
        _ => unreachable!(),
    }
}

/// Uniform random rotation matrix (Shoemake's quaternion construction).
fn random_rotation(rng: &mut SeededRng) -> [[f64; 3]; 3] {
    use std::f64::consts::TAU;
    let u1 = rng.unit_f64();
    let a = rng.unit_f64() * TAU;
    let b = rng.unit_f64() * TAU;
    let (s1, c1) = a.sin_cos();
    let (s2, c2) = b.sin_cos();
    let (r1, r2) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (r1 * s1, r1 * c1, r2 * s2, r2 * c2);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

fn rotate_cloud(cloud: &PointCloud, rot: &[[f64; 3]; 3]) -> PointCloud {
    let coords: Vec<f64> = cloud
        .points()
        .flat_map(|p| {
            (0..3).map(move |r| rot[r][0] * p[0] + rot[r][1] * p[1] + rot[r][2] * p[2])
        })
        .collect();
    PointCloud::new(coords, 3).expect("rotation preserves finiteness")
}

/// Generate the bundled 5-class synthetic suite: `instances_per_kind`
/// seeded, parameter-varied instances per kind, each sampled with `points`
/// points, placed at a seeded random orientation (mesh corpora carry parts
/// at all orientations; axis-aligned instances would be a special case) and
/// unit-ball normalized. IDs look like `torus-007`; the class label is the
/// part before the dash.
pub fn synthetic_suite(cfg: &SuiteConfig) -> Result<Vec<(String, PointCloud)>> {
    let specs: Vec<(usize, usize)> = (0..SUITE_KINDS.len())
        .flat_map(|kind| (0..cfg.instances_per_kind).map(move |i| (kind, i)))
        .collect();
    specs
        .par_iter()
        .map(|&(kind_idx, instance)| {
            let mut param_rng = SeededRng::new(derive_seed(
                cfg.seed,
                &[40, kind_idx as u64, instance as u64],
            ));
            let shape = suite_shape(kind_idx, &mut param_rng);
            let rotation = random_rotation(&mut param_rng);
            let sample_seed =
                derive_seed(cfg.seed, &[41, kind_idx as u64, instance as u64]);
            let raw = shape.sample(cfg.points, sample_seed)?;
            let (normalized, _) = normalize(&rotate_cloud(&raw, &rotation))?;
            Ok((
                format!("{}-{:03}", SUITE_KINDS[kind_idx], instance),
                normalized,
            ))
        })
        .collect()
}

/// Class label of a suite id: everything before the last dash.
pub fn suite_label(shape_id: &str) -> &str {
    shape_id.rsplit_once('-').map_or(shape_id, |(l, _)| l)
}
