//! Cost measurements across instance sizes: build time for both
//! builders, query latency, locator comparisons, storage density, and
//! the union-linearity ratio. One machine-readable `key=value` row per
//! size.

use std::hint::black_box;
use std::process::ExitCode;
use std::time::Instant;

use clap::Args;
use maxdisk::dc::build_dc_with_stats;
use maxdisk::engine::{preprocess, preprocess_naive};
use maxdisk::instance::random_instance;
use maxdisk::{Frame, Point64, Tolerance64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', default_value = "1024,8192,65536")]
    sizes: Vec<usize>,
    /// Build repetitions; the fastest is reported.
    #[arg(long, default_value_t = 2)]
    repeats: usize,
    /// RNG seed; all randomness derives from it.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Timed queries per size.
    #[arg(long, default_value_t = 10_000)]
    queries: usize,
    /// Skip the quadratic builder above this size.
    #[arg(long, default_value_t = 16_384)]
    naive_cap: usize,
}

pub fn run(args: &BenchArgs, tol: &Tolerance64) -> Result<ExitCode, maxdisk::Error> {
    let mut crossover: Option<usize> = None;
    for &n in &args.sizes {
        let seed = args.seed.wrapping_add(n as u64);
        let disks = random_instance::<f64>(n, seed, tol);

        let naive_ms = if n <= args.naive_cap {
            let mut best = f64::INFINITY;
            for _ in 0..args.repeats.max(1) {
                let t0 = Instant::now();
                black_box(preprocess_naive(&disks, tol)?);
                best = best.min(t0.elapsed().as_secs_f64() * 1e3);
            }
            Some(best)
        } else {
            None
        };

        let mut dc_ms = f64::INFINITY;
        let mut structure = None;
        for _ in 0..args.repeats.max(1) {
            let t0 = Instant::now();
            let s = preprocess(&disks, tol)?;
            dc_ms = dc_ms.min(t0.elapsed().as_secs_f64() * 1e3);
            structure = Some(s);
        }
        let s = structure.expect("at least one repeat");
        let (_, stats) = build_dc_with_stats(&disks, tol)?;

        if let Some(nms) = naive_ms {
            if dc_ms <= nms && crossover.is_none() {
                crossover = Some(n);
            }
        }

        let (lx, hx, ly, hy) = super::probe_box(&disks);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xbe9c);
        let probes: Vec<Point64> = (0..args.queries.max(1))
            .map(|_| Point64::new(rng.gen_range(lx..hx), rng.gen_range(ly..hy)))
            .collect();

        let t0 = Instant::now();
        for &q in &probes {
            black_box(s.query(black_box(q)));
        }
        let mean_ns = t0.elapsed().as_secs_f64() * 1e9 / probes.len() as f64;

        let mut comp_sum = 0usize;
        let mut comp_max = 0usize;
        for &q in &probes {
            let (_, c) = s.query_counted(q);
            comp_sum += c;
            comp_max = comp_max.max(c);
        }
        let comp_mean = comp_sum as f64 / probes.len() as f64;

        let mut entries = 0usize;
        let mut arcs = 0usize;
        for f in Frame::ALL {
            entries += s.locator(f).entry_count();
            arcs += s.locator(f).arc_count();
        }
        let per_arc = entries as f64 / arcs.max(1) as f64;
        let union_ratio = stats.union_edges as f64 / stats.union_sectors.max(1) as f64;

        let naive_field = naive_ms.map_or("skipped".to_string(), |v| format!("{v:.3}"));
        println!(
            "size={n} naive_build_ms={naive_field} dc_build_ms={dc_ms:.3} \
             arcs_right={} arcs_top={} arcs_bottom={} \
             query_mean_ns={mean_ns:.1} comparisons_mean={comp_mean:.2} comparisons_max={comp_max} \
             locator_entries_per_arc={per_arc:.2} union_edge_ratio={union_ratio:.2} \
             work_ratio={:.3}",
            s.map(Frame::Right).arcs().len(),
            s.map(Frame::Top).arcs().len(),
            s.map(Frame::Bottom).arcs().len(),
            stats.max_work_ratio,
        );
    }
    match crossover {
        Some(n) => println!("crossover_size={n}"),
        None => println!("crossover_size=none"),
    }
    Ok(ExitCode::SUCCESS)
}
