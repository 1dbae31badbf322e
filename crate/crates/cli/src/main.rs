//! Benchmark CLI for exact and bandit-accelerated k-medoids.
//!
//! `run` fits one dataset and prints the run document as JSON; `bench`
//! sweeps a grid of algorithms, sizes, and k values, printing one CSV row
//! per fit. Exit codes: 0 on success, 1 for usage problems, 2 for
//! malformed input data.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use bandit_kmedoids::{
    fit, generate_synthetic, load_csv, Algorithm, BanditConfig, Error, ErrorKind, Instrumentation,
    Metric,
};

#[derive(Parser)]
#[command(
    name = "bandit-kmedoids",
    version,
    about = "Exact and bandit-accelerated k-medoids clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster one dataset and print the run document as JSON.
    Run(RunArgs),
    /// Sweep a benchmark grid and print one CSV row per fit.
    Bench(BenchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// CSV file of points, one row per point.
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "synthetic",
        required_unless_present = "synthetic"
    )]
    input: Option<PathBuf>,

    /// Treat the first line of --input as a header row.
    #[arg(long, requires = "input")]
    has_header: bool,

    /// Generate a Gaussian mixture instead of reading a file:
    /// CLUSTERS,PER_CLUSTER,DIM[,SPREAD]. The --seed drives generation.
    #[arg(long, value_name = "SPEC", value_parser = parse_synthetic)]
    synthetic: Option<SyntheticSpec>,

    /// Algorithm tag: pam, bp, bp-va, bp-pic, or bp++.
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Algorithm,

    /// Number of medoids.
    #[arg(long)]
    k: usize,

    /// Distance: l1, l2, sql2, or cosine.
    #[arg(long, value_parser = parse_metric, default_value = "l2")]
    metric: Metric,

    /// Seed for synthetic data and the algorithm's sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Per-comparison failure probability; defaults to 1/(k*n^3).
    #[arg(long)]
    delta: Option<f64>,

    /// References drawn between elimination rounds.
    #[arg(long, default_value_t = 100)]
    batch_size: usize,

    /// Swap budget T; defaults to k.
    #[arg(long)]
    max_swaps: Option<usize>,

    /// Permutation-cache width W for the caching algorithms.
    #[arg(long, default_value_t = 1000)]
    cache_width: usize,

    /// Write the JSON here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated algorithm tags.
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_algorithm,
        default_value = "pam,bp,bp-va,bp-pic,bp++"
    )]
    algorithms: Vec<Algorithm>,

    /// Comma-separated dataset sizes (total points; must be divisible by
    /// --clusters).
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,

    /// Comma-separated k values.
    #[arg(long, value_delimiter = ',', required = true)]
    ks: Vec<usize>,

    /// Fits per grid cell; row seeds run base-seed..base-seed+repeats.
    #[arg(long, default_value_t = 1)]
    repeats: usize,

    #[arg(long, default_value_t = 0)]
    base_seed: u64,

    /// Mixture components for the generated datasets.
    #[arg(long, default_value_t = 5)]
    clusters: usize,

    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Within-cluster standard deviation.
    #[arg(long, default_value_t = 2.0)]
    spread: f64,

    /// Distance: l1, l2, sql2, or cosine.
    #[arg(long, value_parser = parse_metric, default_value = "l2")]
    metric: Metric,

    #[arg(long, default_value_t = 100)]
    batch_size: usize,

    #[arg(long, default_value_t = 1000)]
    cache_width: usize,

    /// Delta values to sweep; each multiplies the grid in row order, no
    /// extra CSV column is added.
    #[arg(long, value_delimiter = ',')]
    grid_delta: Vec<f64>,

    /// Swap budgets to sweep; same row-multiplying convention.
    #[arg(long, value_delimiter = ',')]
    grid_max_swaps: Vec<usize>,

    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct SyntheticSpec {
    clusters: usize,
    per_cluster: usize,
    dim: usize,
    spread: f64,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    Algorithm::from_tag(s).ok_or_else(|| {
        format!("unknown algorithm {s:?} (expected pam, bp, bp-va, bp-pic, or bp++)")
    })
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    Metric::from_tag(s)
        .ok_or_else(|| format!("unknown metric {s:?} (expected l1, l2, sql2, or cosine)"))
}

fn parse_synthetic(s: &str) -> Result<SyntheticSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() < 3 || parts.len() > 4 {
        return Err(format!(
            "expected CLUSTERS,PER_CLUSTER,DIM[,SPREAD], got {s:?}"
        ));
    }
    let count = |what: &str, field: &str| -> Result<usize, String> {
        match field.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("{what} must be a positive integer, got {field:?}")),
            Ok(v) => Ok(v),
        }
    };
    let clusters = count("CLUSTERS", parts[0])?;
    let per_cluster = count("PER_CLUSTER", parts[1])?;
    let dim = count("DIM", parts[2])?;
    let spread = if parts.len() == 4 {
        let v: f64 = parts[3]
            .trim()
            .parse()
            .map_err(|_| format!("SPREAD must be a number, got {:?}", parts[3]))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(format!("SPREAD must be positive and finite, got {v}"));
        }
        v
    } else {
        2.0
    };
    Ok(SyntheticSpec {
        clusters,
        per_cluster,
        dim,
        spread,
    })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Bench(args) => bench_command(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(match err.kind() {
            ErrorKind::Usage => 1,
            ErrorKind::Data => 2,
        });
    }
}

fn run_command(args: RunArgs) -> Result<(), Error> {
    let data = match (&args.input, &args.synthetic) {
        (Some(path), None) => load_csv(path, args.has_header)?,
        (None, Some(spec)) => generate_synthetic(
            spec.clusters,
            spec.per_cluster,
            spec.dim,
            spec.spread,
            args.seed,
        )?,
        _ => unreachable!("clap enforces exactly one input source"),
    };
    let config = BanditConfig {
        delta: args.delta,
        batch_size: args.batch_size,
        max_swaps: args.max_swaps,
        cache_width: args.cache_width,
        seed: args.seed,
        ..BanditConfig::default()
    };
    let instr = Instrumentation::new();
    let result = fit(&data, args.metric, args.k, args.algorithm, &config, &instr)?;
    let json = serde_json::to_string_pretty(&result).expect("result serializes");
    emit(args.output.as_deref(), &format!("{json}\n"))
}

fn bench_command(args: BenchArgs) -> Result<(), Error> {
    let deltas: Vec<Option<f64>> = if args.grid_delta.is_empty() {
        vec![None]
    } else {
        args.grid_delta.iter().copied().map(Some).collect()
    };
    let budgets: Vec<Option<usize>> = if args.grid_max_swaps.is_empty() {
        vec![None]
    } else {
        args.grid_max_swaps.iter().copied().map(Some).collect()
    };
    for &n in &args.sizes {
        if n == 0 || n % args.clusters != 0 {
            return Err(Error::InvalidSyntheticSpec {
                spec: format!("size {n} is not divisible by {} clusters", args.clusters),
            });
        }
    }

    let mut rows = String::from(
        "algorithm,n,k,seed,loss,swap_iterations,normalized_distance_count,normalized_wall_ms,cache_hit_rate\n",
    );
    for &algorithm in &args.algorithms {
        for &n in &args.sizes {
            for &k in &args.ks {
                for &delta in &deltas {
                    for &max_swaps in &budgets {
                        for repeat in 0..args.repeats {
                            let seed = args.base_seed + repeat as u64;
                            let data = generate_synthetic(
                                args.clusters,
                                n / args.clusters,
                                args.dim,
                                args.spread,
                                seed,
                            )?;
                            let config = BanditConfig {
                                delta,
                                batch_size: args.batch_size,
                                max_swaps,
                                cache_width: args.cache_width,
                                seed,
                                ..BanditConfig::default()
                            };
                            let instr = Instrumentation::new();
                            let r = fit(&data, args.metric, k, algorithm, &config, &instr)?;
                            let touched = r.cache_hits + r.cache_misses;
                            let hit_rate = if touched == 0 {
                                0.0
                            } else {
                                r.cache_hits as f64 / touched as f64
                            };
                            let normalized_wall = r.wall_ms / (r.swap_iterations + 1) as f64;
                            rows.push_str(&format!(
                                "{},{},{},{},{},{},{},{},{}\n",
                                algorithm.tag(),
                                r.n,
                                r.k,
                                r.seed,
                                r.loss,
                                r.swap_iterations,
                                r.normalized_distance_count,
                                normalized_wall,
                                hit_rate
                            ));
                        }
                    }
                }
            }
        }
    }
    emit(args.output.as_deref(), &rows)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: "<stdout>".to_string(),
                source,
            }),
    }
}
