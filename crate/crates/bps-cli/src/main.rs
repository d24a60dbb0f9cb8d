//! `bps` — command-line front end for the point-cloud encoding toolkit.
//!
//! Machine-readable output (metric values, CSV) goes to stdout; diagnostics
//! and progress go to stderr. Exit codes: 0 success, 1 usage error, 2 data
//! error. `BPS_SEED` supplies a default seed wherever `--seed` is omitted.

use anyhow::{anyhow, bail, Context, Result};
use bps::bench::{
    run_reconstruction_sweep, run_throughput, suite_label, synthetic_suite, SuiteConfig,
    SweepConfig, ThroughputConfig,
};
use bps::ingest::{
    parse_off, read_bpk_file, read_xyz_file, write_bpk_file, write_xyz_file, BpkRecord,
    SynthShape,
};
use bps::{
    chamfer, decode_delta, decode_occupancy, normalize, BasisPointSet, BasisStrategy,
    BpsEncoder, Error as BpsError, FeatureKind, PointCloud,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

fn parse_strategy(s: &str) -> Result<BasisStrategy, String> {
    BasisStrategy::parse(s)
        .ok_or_else(|| format!("unknown strategy {s:?} (rect, ball, uniform, hcp)"))
}

fn parse_kind(s: &str) -> Result<String, String> {
    if SynthShape::default_for(s).is_some() {
        Ok(s.to_string())
    } else {
        Err(format!(
            "unknown shape kind {s:?} (sphere, torus, box, sheet, cylinder)"
        ))
    }
}

fn parse_feature_kind(s: &str) -> Result<String, String> {
    match s {
        "distance" | "delta" => Ok(s.to_string()),
        _ => Err(format!("unknown encoding kind {s:?} (distance, delta)")),
    }
}

#[derive(Parser)]
#[command(
    name = "bps",
    about = "Basis point set encoding toolkit for 3D point clouds",
    version
)]
struct Cli {
    /// Cap internal parallelism (default: available cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a basis point set and store it as BPK
    GenBasis(GenBasisArgs),
    /// Sample a point cloud from the faces of an OFF mesh
    SampleMesh(SampleMeshArgs),
    /// Sample a synthetic surface shape
    Synth(SynthArgs),
    /// Encode a cloud against a basis
    Encode(EncodeArgs),
    /// Decode an encoding back to a point cloud
    Decode(DecodeArgs),
    /// Print the Chamfer distance between two clouds
    Chamfer(ChamferArgs),
    /// Reconstruction-quality vs encoding-length sweep (CSV)
    Sweep(SweepArgs),
    /// Ball-tree build/query throughput benchmark (CSV)
    Bench(BenchArgs),
    /// 1-NN classification of test clouds against labeled training clouds
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct GenBasisArgs {
    /// rect | ball | uniform | hcp
    #[arg(long, value_parser = parse_strategy)]
    strategy: BasisStrategy,
    /// Number of basis points (ball, uniform, hcp)
    #[arg(long)]
    k: Option<usize>,
    /// Grid resolution per axis (rect)
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Seed for the uniform strategy (default: BPS_SEED or 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleMeshArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 2048)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Unit-ball normalize the sampled cloud
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// sphere | torus | box | sheet | cylinder
    #[arg(long, value_parser = parse_kind)]
    kind: String,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Sphere or cylinder radius
    #[arg(long)]
    radius: Option<f64>,
    /// Torus ring radius
    #[arg(long)]
    major: Option<f64>,
    /// Torus tube radius
    #[arg(long)]
    minor: Option<f64>,
    /// Box extents as x,y,z
    #[arg(long, value_delimiter = ',', num_args = 3)]
    extents: Option<Vec<f64>>,
    /// Sheet width (x extent)
    #[arg(long)]
    width: Option<f64>,
    /// Sheet depth (y extent)
    #[arg(long)]
    depth: Option<f64>,
    /// Sheet plane separation
    #[arg(long)]
    gap: Option<f64>,
    /// Cylinder height
    #[arg(long)]
    height: Option<f64>,
    /// Unit-ball normalize the sampled cloud
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    basis: PathBuf,
    /// distance | delta
    #[arg(long, value_parser = parse_feature_kind)]
    kind: String,
    #[arg(long)]
    out: PathBuf,
    /// Encode clouds that exceed the unit ball
    #[arg(long)]
    allow_unnormalized: bool,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Basis the encoding was computed against (required for delta records)
    #[arg(long)]
    basis: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ChamferArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Directory of .off / .xyz shapes; without it the bundled synthetic
    /// suite is used
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Float budgets N (comma separated)
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    /// Strategies to sweep (comma separated)
    #[arg(long, value_delimiter = ',', value_parser = parse_strategy)]
    strategies: Option<Vec<BasisStrategy>>,
    /// Synthetic suite: instances per shape kind
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// Synthetic suite: points per cloud
    #[arg(long, default_value_t = 10_000)]
    points: usize,
    /// Dataset mode: points sampled per OFF mesh
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Dataset mode: cap on the number of shapes (seeded random selection)
    #[arg(long, default_value_t = 1_000)]
    max_shapes: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    k_values: Option<Vec<usize>>,
    #[arg(long, value_parser = parse_strategy)]
    strategy: Option<BasisStrategy>,
    #[arg(long, default_value_t = 11)]
    repetitions: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the query phase (default 1: the scaling-friendly
    /// single-worker measurement)
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Directory of labeled training clouds, `<label>-*.xyz`
    #[arg(long)]
    train: PathBuf,
    /// Directory of test clouds
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    basis: PathBuf,
}

/// `--seed` beats `BPS_SEED` beats 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("BPS_SEED") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| anyhow!("BPS_SEED must be an unsigned 64-bit integer, got {text:?}")),
        Err(_) => Ok(0),
    }
}

fn load_basis(path: &Path) -> Result<BasisPointSet> {
    read_bpk_file(path)
        .and_then(BpkRecord::into_basis)
        .with_context(|| format!("reading basis from {}", path.display()))
}

fn load_cloud(path: &Path) -> Result<PointCloud> {
    read_xyz_file(path).with_context(|| format!("reading cloud from {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::GenBasis(args) => gen_basis(args),
        Command::SampleMesh(args) => sample_mesh(args),
        Command::Synth(args) => synth(args),
        Command::Encode(args) => encode(args),
        Command::Decode(args) => decode(args),
        Command::Chamfer(args) => chamfer_cmd(args),
        Command::Sweep(args) => sweep(args),
        Command::Bench(args) => bench(args),
        Command::Classify(args) => classify(args),
    }
}

fn gen_basis(args: GenBasisArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let basis = match args.strategy {
        BasisStrategy::RectGrid => {
            let m = args
                .m
                .ok_or_else(|| anyhow!("--m is required for the rect strategy"))?;
            bps::generate_rect_grid(m, args.radius)?
        }
        BasisStrategy::BallGrid => {
            let k = args
                .k
                .ok_or_else(|| anyhow!("--k is required for the ball strategy"))?;
            bps::generate_ball_grid(k, args.radius)?
        }
        BasisStrategy::UniformBall => {
            let k = args
                .k
                .ok_or_else(|| anyhow!("--k is required for the uniform strategy"))?;
            bps::generate_uniform_ball(k, args.radius, seed)?
        }
        BasisStrategy::Hcp => {
            let k = args
                .k
                .ok_or_else(|| anyhow!("--k is required for the hcp strategy"))?;
            bps::generate_hcp(k, args.radius)?
        }
    };
    write_bpk_file(&args.out, &BpkRecord::Basis(basis.clone()))
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "wrote {} basis: k={} r={} id={:016x} -> {}",
        basis.strategy(),
        basis.len(),
        basis.radius(),
        basis.content_id(),
        args.out.display()
    );
    Ok(())
}

fn sample_mesh(args: SampleMeshArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let file = std::fs::File::open(&args.input)
        .with_context(|| format!("opening {}", args.input.display()))?;
    let mesh = parse_off(std::io::BufReader::new(file))
        .with_context(|| format!("parsing {}", args.input.display()))?;
    let mut cloud = mesh.sample_surface(args.n, seed)?;
    if args.normalize {
        cloud = normalize(&cloud)?.0;
    }
    write_xyz_file(&args.out, &cloud)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "sampled {} points from {} ({} vertices, {} faces) -> {}",
        cloud.len(),
        args.input.display(),
        mesh.vertex_count(),
        mesh.face_count(),
        args.out.display()
    );
    Ok(())
}

fn synth_shape_from_args(args: &SynthArgs) -> Result<SynthShape> {
    let base = SynthShape::default_for(&args.kind).expect("kind validated by clap");
    Ok(match base {
        SynthShape::Sphere { radius } => SynthShape::Sphere {
            radius: args.radius.unwrap_or(radius),
        },
        SynthShape::Torus { major, minor } => SynthShape::Torus {
            major: args.major.unwrap_or(major),
            minor: args.minor.unwrap_or(minor),
        },
        SynthShape::Box { extents } => SynthShape::Box {
            extents: match &args.extents {
                Some(e) => [e[0], e[1], e[2]],
                None => extents,
            },
        },
        SynthShape::TwoSidedSheet { width, depth, gap } => SynthShape::TwoSidedSheet {
            width: args.width.unwrap_or(width),
            depth: args.depth.unwrap_or(depth),
            gap: args.gap.unwrap_or(gap),
        },
        SynthShape::Cylinder { radius, height } => SynthShape::Cylinder {
            radius: args.radius.unwrap_or(radius),
            height: args.height.unwrap_or(height),
        },
    })
}

fn synth(args: SynthArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let shape = synth_shape_from_args(&args)?;
    let mut cloud = shape.sample(args.n, seed)?;
    if args.normalize {
        cloud = normalize(&cloud)?.0;
    }
    write_xyz_file(&args.out, &cloud)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "sampled {} {} points -> {}",
        cloud.len(),
        shape.kind_name(),
        args.out.display()
    );
    Ok(())
}

fn encode(args: EncodeArgs) -> Result<()> {
    let cloud = load_cloud(&args.input)?;
    let basis = load_basis(&args.basis)?;
    let encoder = BpsEncoder::new(&basis).allow_unnormalized(args.allow_unnormalized);
    let result = match args.kind.as_str() {
        "distance" => encoder.distance(&cloud),
        _ => encoder.delta(&cloud),
    };
    let enc = result.map_err(|e| match e {
        BpsError::CloudNotNormalized { max_norm } => anyhow!(
            "{}: cloud max norm {max_norm:.6} exceeds the unit ball; normalize it or pass --allow-unnormalized",
            args.input.display()
        ),
        other => anyhow!(other),
    })?;
    write_bpk_file(&args.out, &BpkRecord::Encoding(enc.clone()))
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "encoded {} ({} points) against basis {:016x}: k={} kind={} -> {}",
        args.input.display(),
        cloud.len(),
        enc.basis_id(),
        enc.len(),
        args.kind,
        args.out.display()
    );
    Ok(())
}

fn decode(args: DecodeArgs) -> Result<()> {
    let record = read_bpk_file(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let cloud = match record {
        BpkRecord::Encoding(enc) => match enc.kind() {
            FeatureKind::Delta => {
                let basis_path = args
                    .basis
                    .as_ref()
                    .ok_or_else(|| anyhow!("--basis is required to decode a delta encoding"))?;
                let basis = load_basis(basis_path)?;
                decode_delta(&enc, &basis)?
            }
            FeatureKind::Distance => bail!(
                "{}: distance encodings store no directions and cannot be decoded; encode with --kind delta",
                args.input.display()
            ),
        },
        BpkRecord::Grid(grid) => decode_occupancy(&grid)
            .with_context(|| format!("{}: only occupancy grids decode", args.input.display()))?,
        BpkRecord::Basis(_) => bail!(
            "{}: this is a basis record, not an encoding",
            args.input.display()
        ),
    };
    write_xyz_file(&args.out, &cloud)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("decoded {} points -> {}", cloud.len(), args.out.display());
    Ok(())
}

fn chamfer_cmd(args: ChamferArgs) -> Result<()> {
    let a = load_cloud(&args.a)?;
    let b = load_cloud(&args.b)?;
    let value = chamfer(&a, &b)?;
    println!("{value:e}");
    Ok(())
}

fn walk_shape_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.with_context(|| format!("walking {}", dir.display()))?;
        if !entry.file_type().is_file() {
            continue;
        }
        match entry.path().extension().and_then(|e| e.to_str()) {
            Some("off") | Some("xyz") => files.push(entry.into_path()),
            _ => {}
        }
    }
    Ok(files)
}

fn load_dataset(args: &SweepArgs, seed: u64) -> Result<Vec<(String, PointCloud)>> {
    let dir = match &args.dataset {
        Some(dir) => dir,
        None => {
            eprintln!(
                "using the synthetic suite: 5 kinds x {} instances x {} points",
                args.instances, args.points
            );
            return Ok(synthetic_suite(&SuiteConfig {
                instances_per_kind: args.instances,
                points: args.points,
                seed,
            })?);
        }
    };
    let mut files = walk_shape_files(dir)?;
    if files.is_empty() {
        bail!("no .off or .xyz files under {}", dir.display());
    }
    // seeded random selection when the corpus exceeds the cap
    if files.len() > args.max_shapes {
        let mut rng = bps::rng::SeededRng::new(bps::rng::derive_seed(seed, &[50]));
        for i in 0..args.max_shapes {
            let j = i + rng.below(files.len() - i);
            files.swap(i, j);
        }
        files.truncate(args.max_shapes);
        files.sort();
    }
    eprintln!("loading {} shapes from {}", files.len(), dir.display());
    let samples = args.samples;
    files
        .iter()
        .enumerate()
        .map(|(i, path)| {
            let raw = match path.extension().and_then(|e| e.to_str()) {
                Some("off") => {
                    let file = std::fs::File::open(path)
                        .with_context(|| format!("opening {}", path.display()))?;
                    let mesh = parse_off(std::io::BufReader::new(file))
                        .with_context(|| format!("parsing {}", path.display()))?;
                    mesh.sample_surface(samples, bps::rng::derive_seed(seed, &[51, i as u64]))?
                }
                _ => load_cloud(path)?,
            };
            let (normalized, _) = normalize(&raw)?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("shape-{i}"));
            Ok((id, normalized))
        })
        .collect()
}

fn sweep(args: SweepArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let dataset = load_dataset(&args, seed)?;
    let mut cfg = SweepConfig {
        seed,
        ..SweepConfig::default()
    };
    if let Some(n_values) = &args.n_values {
        cfg.n_values = n_values.clone();
    }
    if let Some(strategies) = &args.strategies {
        cfg.strategies = strategies.clone();
    }
    let report = run_reconstruction_sweep(&dataset, &cfg)?;
    let failed = report.rows.iter().filter(|r| r.chamfer.is_none()).count();
    let file = std::fs::File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    report.write_csv(std::io::BufWriter::new(file))?;
    eprintln!(
        "sweep: {} rows ({} failed) -> {}",
        report.rows.len(),
        failed,
        args.out.display()
    );
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let seed = resolve_seed(args.seed)?;
    let mut cfg = ThroughputConfig {
        seed,
        repetitions: args.repetitions,
        workers: args.workers,
        ..ThroughputConfig::default()
    };
    if let Some(n_values) = &args.n_values {
        cfg.n_values = n_values.clone();
    }
    if let Some(k_values) = &args.k_values {
        cfg.k_values = k_values.clone();
    }
    if let Some(strategy) = args.strategy {
        cfg.strategy = strategy;
    }
    let report = run_throughput(&cfg)?;
    let file = std::fs::File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    report.write_csv(std::io::BufWriter::new(file))?;
    eprintln!(
        "throughput: {} configurations, {} repetitions -> {}",
        report.rows.len(),
        cfg.repetitions,
        args.out.display()
    );
    Ok(())
}

fn xyz_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("xyz"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .xyz files under {}", dir.display());
    }
    Ok(files)
}

fn classify(args: ClassifyArgs) -> Result<()> {
    let basis = load_basis(&args.basis)?;
    let encoder = BpsEncoder::new(&basis);
    let mut train = Vec::new();
    for path in xyz_files(&args.train)? {
        let cloud = load_cloud(&path)?;
        let stem = path.file_stem().unwrap_or_default().to_string_lossy();
        let label = suite_label(&stem).to_string();
        train.push((encoder.distance(&cloud)?, label));
    }
    let mut test_names = Vec::new();
    let mut test = Vec::new();
    for path in xyz_files(&args.test)? {
        let cloud = load_cloud(&path)?;
        test_names.push(
            path.file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned(),
        );
        test.push(encoder.distance(&cloud)?);
    }
    let predicted = bps::bench::knn_classify(&train, &test)?;
    let mut hits = 0usize;
    let mut labeled = 0usize;
    println!("file,predicted");
    for (name, label) in test_names.iter().zip(&predicted) {
        println!("{name},{label}");
        let stem = name.trim_end_matches(".xyz");
        let truth = suite_label(stem);
        if truth != stem {
            labeled += 1;
            if truth == label {
                hits += 1;
            }
        }
    }
    if labeled > 0 {
        eprintln!(
            "accuracy over {} labeled test files: {:.4}",
            labeled,
            hits as f64 / labeled as f64
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here as non-errors
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
