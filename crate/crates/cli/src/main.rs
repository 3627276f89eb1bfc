//! Command-line surface over the maxdisk library.
//!
//! Subcommands: `gen` (random instances), `build` (structure files),
//! `query` (answer files), `verify` (compare against the linear-scan
//! oracle), `bench` (cost measurements across sizes), `render` (SVG).
//! Exit codes: 0 success, 1 verification found mismatches, 2 bad input
//! (parse, validation, I/O).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use maxdisk::engine::{self, Structure};
use maxdisk::instance::GenParams;
use maxdisk::{codec, Disk64, Frame, Point64, Tolerance64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod bench;
mod render;

#[derive(Parser)]
#[command(
    name = "maxdisk",
    version,
    about = "Preprocess planar disks, then answer largest-disk-containing-point queries in O(log n)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builder {
    /// Divide-and-conquer map construction.
    Dc,
    /// Quadratic reference construction.
    Naive,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded random instance with general-position margins.
    Gen {
        /// Number of disks.
        #[arg(long)]
        count: usize,
        /// RNG seed; all randomness derives from it.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Half side length of the square the centers are drawn from
        /// (default scales with sqrt(count)).
        #[arg(long)]
        half_extent: Option<f64>,
        /// Smallest radius.
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
        /// Largest radius.
        #[arg(long, default_value_t = 8.0)]
        r_max: f64,
        /// Output disk file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a structure file from a disk file.
    Build {
        /// Input disk file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Builder::Dc)]
        builder: Builder,
        /// Output structure file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a query file against a structure file.
    Query {
        /// Structure file written by `build`.
        #[arg(long)]
        structure: PathBuf,
        /// Query file, one `x y` per line.
        #[arg(long)]
        queries: PathBuf,
        /// Output answers file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build from a disk file and compare queries against the oracle.
    Verify {
        /// Input disk file.
        #[arg(long)]
        input: PathBuf,
        /// Number of accepted probe points.
        #[arg(long, default_value_t = 10_000)]
        probes: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Builder::Dc)]
        builder: Builder,
    },
    /// Measure build and query costs across instance sizes.
    Bench(bench::BenchArgs),
    /// Render disks and map arcs as an SVG document.
    Render {
        /// Disk file; maps are built on the fly.
        #[arg(long, conflicts_with = "structure", required_unless_present = "structure")]
        input: Option<PathBuf>,
        /// Structure file; disks and maps are taken from it.
        #[arg(long)]
        structure: Option<PathBuf>,
        /// Output SVG file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, maxdisk::Error> {
    let tol = Tolerance64::default();
    match cli.cmd {
        Cmd::Gen { count, seed, half_extent, r_min, r_max, out } => {
            let params = GenParams { count, seed, half_extent, r_min, r_max };
            let disks = maxdisk::instance::generate(&params, &tol)?;
            emit(out.as_deref(), &codec::write_disks(&disks))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Build { input, builder, out } => {
            let disks = codec::parse_disks(&fs::read_to_string(&input)?)?;
            let t0 = Instant::now();
            let s = build_structure(&disks, builder, &tol)?;
            let ms = t0.elapsed().as_secs_f64() * 1e3;
            fs::write(&out, codec::write_structure(&s))?;
            println!("builder={}", builder_name(builder));
            println!("disks={}", disks.len());
            for f in Frame::ALL {
                println!("arcs_{f}={}", s.map(f).arcs().len());
            }
            println!("build_ms={ms:.3}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Query { structure, queries, out } => {
            let s = codec::read_structure(&fs::read(&structure)?)?;
            let qs = codec::parse_queries(&fs::read_to_string(&queries)?)?;
            let answers = qs.iter().map(|&q| s.query(q).best);
            emit(out.as_deref(), &codec::write_answers(answers))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { input, probes, seed, builder } => {
            let disks = codec::parse_disks(&fs::read_to_string(&input)?)?;
            let s = build_structure(&disks, builder, &tol)?;
            verify(&disks, &s, probes, seed, &tol)
        }
        Cmd::Bench(args) => bench::run(&args, &tol),
        Cmd::Render { input, structure, out } => {
            let svg = match structure {
                Some(path) => {
                    let s = codec::read_structure(&fs::read(&path)?)?;
                    let maps = Frame::ALL.map(|f| s.map(f).clone());
                    render::render_svg(s.disks(), Some(&maps))
                }
                None => {
                    let disks = codec::parse_disks(&fs::read_to_string(input.as_ref().unwrap())?)?;
                    let maps = if disks.is_empty() {
                        None
                    } else {
                        Some(maxdisk::dc::build_dc_frames(&disks, &tol)?)
                    };
                    render::render_svg(&disks, maps.as_ref())
                }
            };
            emit(out.as_deref(), &svg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn builder_name(b: Builder) -> &'static str {
    match b {
        Builder::Dc => "dc",
        Builder::Naive => "naive",
    }
}

fn build_structure(
    disks: &[Disk64],
    builder: Builder,
    tol: &Tolerance64,
) -> Result<Structure<f64>, maxdisk::Error> {
    match builder {
        Builder::Dc => engine::preprocess(disks, tol),
        Builder::Naive => engine::preprocess_naive(disks, tol),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), maxdisk::Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Probe box with one max-radius margin on every side.
fn probe_box(disks: &[Disk64]) -> (f64, f64, f64, f64) {
    if disks.is_empty() {
        return (-1.0, 1.0, -1.0, 1.0);
    }
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for d in disks {
        b.0 = b.0.min(d.center.x - d.radius);
        b.1 = b.1.max(d.center.x + d.radius);
        b.2 = b.2.min(d.center.y - d.radius);
        b.3 = b.3.max(d.center.y + d.radius);
    }
    (b.0 - 1.0, b.1 + 1.0, b.2 - 1.0, b.3 + 1.0)
}

fn near_any_boundary(disks: &[Disk64], q: Point64, band: f64) -> bool {
    disks.iter().any(|d| (d.center.dist(q) - d.radius).abs() <= band)
}

fn verify(
    disks: &[Disk64],
    s: &Structure<f64>,
    probes: usize,
    seed: u64,
    tol: &Tolerance64,
) -> Result<ExitCode, maxdisk::Error> {
    let band = 10.0 * tol.eps_geom;
    let (lx, hx, ly, hy) = probe_box(disks);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    let mut mismatches = 0usize;
    let mut first: Option<(Point64, Option<u64>, Option<u64>)> = None;
    while accepted < probes {
        attempts += 1;
        if attempts > probes.saturating_mul(100) + 1000 {
            return Err(maxdisk::Error::DegenerateInput(
                "could not sample enough probes clear of disk boundaries".into(),
            ));
        }
        let q = Point64::new(rng.gen_range(lx..hx), rng.gen_range(ly..hy));
        if near_any_boundary(disks, q, band) {
            continue;
        }
        accepted += 1;
        let got = s.query(q).best;
        let want = engine::oracle_query(disks, q);
        if got != want {
            mismatches += 1;
            first.get_or_insert((q, got, want));
        }
    }
    println!("probes={accepted}");
    println!("mismatches={mismatches}");
    if let Some((q, got, want)) = first {
        let show = |v: Option<u64>| v.map_or("NONE".into(), |id| id.to_string());
        println!(
            "first_mismatch: query=({}, {}) structure={} oracle={}",
            q.x,
            q.y,
            show(got),
            show(want)
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
