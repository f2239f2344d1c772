//! Command-line front end: dataset generation, single algorithm runs, the
//! 30-run benchmark protocol, and re-rendering of persisted results.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O error, 4 internal invariant
//! breach.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wellsep::datagen::{self, GenConfig};
use wellsep::harness::{self, ExperimentSpec};
use wellsep::lloyd::LloydConfig;
use wellsep::seeding::{SeedingMethod, DEFAULT_BOOST};
use wellsep::{Error, LabeledDataset64};

#[derive(Parser)]
#[command(
    name = "wellsep",
    about = "k-means seeding strategies on well-separated synthetic clusters",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GenArgs {
    /// Grid rows (clusters = rows x cols)
    #[arg(long, default_value_t = 8)]
    rows: usize,
    /// Grid columns
    #[arg(long, default_value_t = 8)]
    cols: usize,
    /// Regular points per cluster
    #[arg(long, default_value_t = 40)]
    size: usize,
    /// Cluster ball radius
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Noise points as a percentage of the regular point count
    #[arg(long = "noise-pct", default_value_t = 0.0)]
    noise_pct: f64,
    /// Maximum center displacement off the grid, in units of the radius
    #[arg(long, default_value_t = 0.0)]
    displacement: f64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GenArgs {
    fn to_config(&self) -> GenConfig {
        GenConfig {
            grid_rows: self.rows,
            grid_cols: self.cols,
            cluster_size: self.size,
            radius: self.radius,
            noise_pct: self.noise_pct,
            displacement_max: self.displacement,
            rng_seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled dataset (CSV plus JSON sidecar)
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one algorithm on a dataset written by `generate`
    Run {
        /// Dataset CSV (the sidecar written next to it is required)
        #[arg(long)]
        data: PathBuf,
        /// Algorithm: random|tc|kmpp|md|kmppb|global
        #[arg(long)]
        algo: String,
        /// Number of clusters; defaults to the intended cluster count
        #[arg(long)]
        k: Option<usize>,
        /// Boost width for kmppb
        #[arg(long, default_value_t = DEFAULT_BOOST)]
        b: usize,
        /// RNG seed for the seeding strategy
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lloyd iteration cap
        #[arg(long = "max-iters", default_value_t = 100)]
        max_iters: usize,
        /// Output JSON path
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full benchmark protocol (30 runs by default, all algorithms)
    Bench {
        /// Experiment spec JSON; overrides the inline options
        #[arg(long, conflicts_with_all = ["rows", "cols", "size", "radius", "noise_pct", "displacement", "runs", "seed", "algos", "b", "max_iters"])]
        spec: Option<PathBuf>,
        #[command(flatten)]
        gen: GenArgs,
        /// Number of generated datasets
        #[arg(long, default_value_t = 30)]
        runs: usize,
        /// Comma-separated algorithm list (default: all six)
        #[arg(long)]
        algos: Option<String>,
        /// Boost width for kmppb
        #[arg(long, default_value_t = DEFAULT_BOOST)]
        b: usize,
        /// Lloyd iteration cap
        #[arg(long = "max-iters", default_value_t = 100)]
        max_iters: usize,
        /// Output directory
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        /// Also persist the per-run datasets under <out-dir>/datasets/
        #[arg(long = "keep-datasets", default_value_t = false)]
        keep_datasets: bool,
    },
    /// Re-render tables and figures from a persisted bench directory
    Report {
        /// Directory containing report.json and worst_*.json
        #[arg(long = "in")]
        dir: PathBuf,
    },
}

fn parse_algos(list: Option<&str>, b: usize) -> Result<Vec<SeedingMethod>, Error> {
    match list {
        None => Ok(SeedingMethod::all(b)),
        Some(raw) => raw
            .split(',')
            .map(|id| SeedingMethod::from_id(id.trim(), b))
            .collect(),
    }
}

fn cmd_generate(gen: GenArgs, out: PathBuf) -> Result<(), Error> {
    let config = gen.to_config();
    let ld = datagen::generate::<f64>(&config)?;
    datagen::write_files(&ld, &out)?;
    eprintln!(
        "wrote {} points ({} regular + {} noise, {} clusters) to {} (+ sidecar)",
        ld.dataset.len(),
        ld.num_regular(),
        ld.num_noise(),
        ld.k(),
        out.display()
    );
    Ok(())
}

fn cmd_run(
    data: PathBuf,
    algo: String,
    k: Option<usize>,
    b: usize,
    seed: u64,
    max_iters: usize,
    out: PathBuf,
) -> Result<(), Error> {
    let method = SeedingMethod::from_id(&algo, b)?;
    let ld: LabeledDataset64 = datagen::read_files(&data)?;
    let k = k.unwrap_or_else(|| ld.k());
    let cfg = LloydConfig {
        max_iters,
        ..Default::default()
    };
    let (seeds, result) = harness::run_single(&ld, method, k, seed, &cfg)?;
    let wrong = wellsep::evaluation::wrong_clusters_pct(&ld, &result.clustering)?;
    let payload = json!({
        "algorithm": method.id(),
        "display_name": method.display_name(),
        "k": k,
        "rng_seed": seeds.rng_seed,
        "tot_within_ss": result.cost,
        "wrong_clusters_pct": wrong,
        "iterations": result.iterations,
        "converged": result.converged,
        "seed_centroids": seeds.centroids,
        "final_centroids": result.clustering.centroids,
        "assignment": result.clustering.assignment,
    });
    let mut bytes = serde_json::to_vec_pretty(&payload)?;
    bytes.push(b'\n');
    std::fs::write(&out, bytes)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", out.display())))?;
    eprintln!(
        "{}: totWithinSS {:.4}, wrongClustersPerc {:.2}%, {} iterations ({})",
        method.display_name(),
        result.cost,
        wrong,
        result.iterations,
        if result.converged {
            "converged"
        } else {
            "iteration cap"
        },
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    spec_path: Option<PathBuf>,
    gen: GenArgs,
    runs: usize,
    algos: Option<String>,
    b: usize,
    max_iters: usize,
    out_dir: PathBuf,
    keep_datasets: bool,
) -> Result<(), Error> {
    let spec = match spec_path {
        Some(path) => {
            let mut spec = ExperimentSpec::from_json_file(&path)?;
            spec.output_dir = out_dir;
            spec
        }
        None => ExperimentSpec {
            gen: gen.to_config(),
            algorithms: parse_algos(algos.as_deref(), b)?,
            runs,
            master_seed: gen.seed,
            lloyd: LloydConfig {
                max_iters,
                ..Default::default()
            },
            output_dir: out_dir,
        },
    };
    let exp = harness::run_experiment(&spec)?;
    if keep_datasets {
        harness::persist_datasets(&spec, &spec.output_dir)?;
    }
    let (_, txt) = harness::emit_table(&exp.report);
    print!("{txt}");
    eprintln!("results in {}", spec.output_dir.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { gen, out } => cmd_generate(gen, out),
        Command::Run {
            data,
            algo,
            k,
            b,
            seed,
            max_iters,
            out,
        } => cmd_run(data, algo, k, b, seed, max_iters, out),
        Command::Bench {
            spec,
            gen,
            runs,
            algos,
            b,
            max_iters,
            out_dir,
            keep_datasets,
        } => cmd_bench(spec, gen, runs, algos, b, max_iters, out_dir, keep_datasets),
        Command::Report { dir } => harness::rerender(&dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) => ExitCode::from(2),
                Error::Io(_) => ExitCode::from(3),
                Error::Invariant(_) => ExitCode::from(4),
            }
        }
    }
}
