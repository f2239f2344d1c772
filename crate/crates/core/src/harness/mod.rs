//! Experiment orchestration: generate a fresh dataset per run, execute every
//! configured algorithm on the same sample, collect the three metrics,
//! summarize over the runs, and persist tables, worst cases and figures.
//!
//! Everything that influences results is derived from the master seed, so a
//! report is a pure function of its [`ExperimentSpec`]. Wall-clock timings
//! are informational only and live in a separate file for that reason.

pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{self, GenConfig, LabeledDataset};
use crate::error::{Error, Result};
use crate::evaluation::{self, RunMetrics, SummaryRow};
use crate::lloyd::{self, LloydConfig, LloydResult};
use crate::model::Clustering;
use crate::seeding::{initialize, SeedSet, SeedingMethod};
use crate::separation;

/// Stream tag reserved for dataset generation in [`derive_seed`].
pub const DATASET_STREAM: u64 = 0;

/// Absolute slack allowed between consecutive Lloyd passes before the run is
/// declared non-monotone.
pub const MONOTONICITY_SLACK: f64 = 1e-9;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic seed for one (run, stream) cell of an experiment. Stream 0
/// feeds the dataset generator; each algorithm uses its own stream tag, so
/// runs can execute in any order without changing any result.
pub fn derive_seed(master_seed: u64, run_index: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ run_index) ^ stream)
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Dataset template; its `rng_seed` is overridden per run.
    pub gen: GenConfig,
    pub algorithms: Vec<SeedingMethod>,
    pub runs: usize,
    pub master_seed: u64,
    pub lloyd: LloydConfig,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.gen.validate()?;
        if self.runs == 0 {
            return Err(Error::usage("an experiment needs at least one run"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::usage("an experiment needs at least one algorithm"));
        }
        let mut ids: Vec<&str> = self.algorithms.iter().map(|a| a.id()).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.algorithms.len() {
            return Err(Error::usage("duplicate algorithms in the experiment spec"));
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let raw = std::fs::read(path)
            .map_err(|e| Error::Io(format!("cannot read spec {}: {e}", path.display())))?;
        let spec: ExperimentSpec = serde_json::from_slice(&raw)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Metrics and Lloyd telemetry of one (run, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub algorithm: String,
    pub metrics: RunMetrics<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Reference to the run with the highest error percentage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub run_index: usize,
    pub wrong_clusters_pct: f64,
}

/// Per-algorithm summary over all runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub display_name: String,
    pub tot_within_ss: SummaryRow<f64>,
    pub wrong_clusters_pct: SummaryRow<f64>,
    pub rel_tot_within_ss: SummaryRow<f64>,
    pub worst_case: WorstCase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStats {
    pub total_runs: usize,
    pub converged_runs: usize,
}

/// The deterministic part of an experiment's outcome; serialized as
/// `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub summaries: Vec<AlgorithmSummary>,
    pub runs: Vec<RunRecord>,
    pub convergence: ConvergenceStats,
}

/// Worst-case payload, persisted per algorithm so figures can be re-rendered
/// without recomputation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorstCasePayload {
    pub algorithm: String,
    pub display_name: String,
    pub run_index: usize,
    pub wrong_clusters_pct: f64,
    pub dataset: LabeledDataset<f64>,
    pub clustering: Clustering<f64>,
}

/// Wall-clock seconds spent per algorithm, summed over runs. Informational;
/// never part of the deterministic report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgoTiming {
    pub algorithm: String,
    pub seconds: f64,
}

/// In-memory result of [`execute`].
#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: ExperimentReport,
    pub worst_cases: Vec<WorstCasePayload>,
    pub timings: Vec<AlgoTiming>,
}

/// One algorithm run on one dataset: seeding plus the Lloyd iteration, with
/// the monotonicity guard applied.
pub fn run_single(
    ld: &LabeledDataset<f64>,
    method: SeedingMethod,
    k: usize,
    seed: u64,
    cfg: &LloydConfig,
) -> Result<(SeedSet<f64>, LloydResult<f64>)> {
    let seeds = initialize(method, ld, k, seed)?;
    let result = lloyd::run(&ld.dataset, &seeds, cfg)?;
    if !lloyd::trace_is_monotone(&result.cost_trace, MONOTONICITY_SLACK) {
        return Err(Error::invariant(format!(
            "non-monotone cost trace for {} (seed {seed}): {:?}",
            method.id(),
            result.cost_trace
        )));
    }
    Ok((seeds, result))
}

struct RunOutcome {
    run_index: usize,
    dataset: LabeledDataset<f64>,
    per_algo: Vec<(LloydResult<f64>, RunMetrics<f64>, f64)>, // result, metrics, seconds
}

fn execute_one_run(spec: &ExperimentSpec, run_index: usize) -> Result<RunOutcome> {
    let mut gen = spec.gen.clone();
    gen.rng_seed = derive_seed(spec.master_seed, run_index as u64, DATASET_STREAM);
    let ld = datagen::generate::<f64>(&gen)?;
    let k = gen.k();

    if k >= 2 {
        let report = separation::verify(&ld)?;
        if !report.nominal.satisfied {
            return Err(Error::invariant(format!(
                "generated dataset (run {run_index}) misses the separation threshold: \
                 gap {} < {}",
                report.nominal.min_ball_gap, report.nominal.threshold
            )));
        }
    }

    let mut per_algo = Vec::with_capacity(spec.algorithms.len());
    for method in &spec.algorithms {
        let started = Instant::now();
        let seed = derive_seed(spec.master_seed, run_index as u64, method.stream());
        let (_, result) = run_single(&ld, *method, k, seed, &spec.lloyd)?;
        let wcp = evaluation::wrong_clusters_pct(&ld, &result.clustering)?;
        let metrics = RunMetrics {
            tot_within_ss: result.cost,
            wrong_clusters_pct: wcp,
            rel_tot_within_ss: None,
        };
        per_algo.push((result, metrics, started.elapsed().as_secs_f64()));
    }

    // relative costs need every algorithm's result on this dataset
    let costs: Vec<f64> = per_algo.iter().map(|(r, _, _)| r.cost).collect();
    let rels = evaluation::rel_tot_within_ss(&costs)?;
    if !rels.contains(&1.0) {
        return Err(Error::invariant(
            "no algorithm attained relative cost 1.0".to_string(),
        ));
    }
    for ((_, metrics, _), rel) in per_algo.iter_mut().zip(rels) {
        metrics.rel_tot_within_ss = Some(rel);
    }

    Ok(RunOutcome {
        run_index,
        dataset: ld,
        per_algo,
    })
}

/// Runs the whole experiment in memory. Runs execute in parallel; all
/// randomness is pre-derived per (run, stream), so the outcome does not
/// depend on scheduling.
pub fn execute(spec: &ExperimentSpec) -> Result<Experiment> {
    spec.validate()?;

    let mut outcomes: Vec<RunOutcome> = (0..spec.runs)
        .into_par_iter()
        .map(|run_index| execute_one_run(spec, run_index))
        .collect::<Result<Vec<_>>>()?;
    outcomes.sort_by_key(|o| o.run_index);

    let mut records = Vec::with_capacity(spec.runs * spec.algorithms.len());
    let mut worst: Vec<Option<WorstCasePayload>> = vec![None; spec.algorithms.len()];
    let mut seconds = vec![0.0f64; spec.algorithms.len()];
    let mut converged_runs = 0usize;

    for outcome in &mut outcomes {
        for (a, (result, metrics, secs)) in outcome.per_algo.iter().enumerate() {
            let method = spec.algorithms[a];
            records.push(RunRecord {
                run_index: outcome.run_index,
                algorithm: method.id().to_string(),
                metrics: *metrics,
                iterations: result.iterations,
                converged: result.converged,
            });
            seconds[a] += secs;
            if result.converged {
                converged_runs += 1;
            }
            let is_worse = match &worst[a] {
                None => true,
                Some(w) => metrics.wrong_clusters_pct > w.wrong_clusters_pct,
            };
            if is_worse {
                worst[a] = Some(WorstCasePayload {
                    algorithm: method.id().to_string(),
                    display_name: method.display_name().to_string(),
                    run_index: outcome.run_index,
                    wrong_clusters_pct: metrics.wrong_clusters_pct,
                    dataset: outcome.dataset.clone(),
                    clustering: result.clustering.clone(),
                });
            }
        }
    }

    let mut summaries = Vec::with_capacity(spec.algorithms.len());
    for (a, method) in spec.algorithms.iter().enumerate() {
        let of_algo: Vec<&RunRecord> = records
            .iter()
            .filter(|r| r.algorithm == method.id())
            .collect();
        let twss: Vec<f64> = of_algo.iter().map(|r| r.metrics.tot_within_ss).collect();
        let wcp: Vec<f64> = of_algo
            .iter()
            .map(|r| r.metrics.wrong_clusters_pct)
            .collect();
        let rel: Vec<f64> = of_algo
            .iter()
            .map(|r| r.metrics.rel_tot_within_ss.expect("rel filled above"))
            .collect();
        let w = worst[a].as_ref().expect("runs >= 1");
        summaries.push(AlgorithmSummary {
            algorithm: method.id().to_string(),
            display_name: method.display_name().to_string(),
            tot_within_ss: evaluation::summarize(&twss)?,
            wrong_clusters_pct: evaluation::summarize(&wcp)?,
            rel_tot_within_ss: evaluation::summarize(&rel)?,
            worst_case: WorstCase {
                run_index: w.run_index,
                wrong_clusters_pct: w.wrong_clusters_pct,
            },
        });
    }

    let report = ExperimentReport {
        spec: spec.clone(),
        summaries,
        runs: records,
        convergence: ConvergenceStats {
            total_runs: spec.runs * spec.algorithms.len(),
            converged_runs,
        },
    };
    let timings = spec
        .algorithms
        .iter()
        .zip(seconds)
        .map(|(m, s)| AlgoTiming {
            algorithm: m.id().to_string(),
            seconds: s,
        })
        .collect();
    Ok(Experiment {
        report,
        worst_cases: worst.into_iter().map(|w| w.expect("runs >= 1")).collect(),
        timings,
    })
}

/// Fixed CSV schema of the summary table.
pub const TABLE_HEADER: &str = "algorithm,twss_mean,twss_sd,wcp_mean,wcp_sd,rel_mean,rel_sd";

/// Renders the summary table as CSV and as a human-readable text table.
pub fn emit_table(report: &ExperimentReport) -> (String, String) {
    let mut csv = String::from(TABLE_HEADER);
    csv.push('\n');
    for s in &report.summaries {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.algorithm,
            s.tot_within_ss.mean,
            s.tot_within_ss.sd,
            s.wrong_clusters_pct.mean,
            s.wrong_clusters_pct.sd,
            s.rel_tot_within_ss.mean,
            s.rel_tot_within_ss.sd
        ));
    }

    let mut txt = format!(
        "{:<14} {:>14} {:>12} {:>10} {:>8} {:>9} {:>8}\n",
        "algorithm", "totWithinSS", "SD", "wrong%", "SD", "relTWSS", "SD"
    );
    for s in &report.summaries {
        txt.push_str(&format!(
            "{:<14} {:>14.2} {:>12.2} {:>10.2} {:>8.2} {:>9.4} {:>8.4}\n",
            s.display_name,
            s.tot_within_ss.mean,
            s.tot_within_ss.sd,
            s.wrong_clusters_pct.mean,
            s.wrong_clusters_pct.sd,
            s.rel_tot_within_ss.mean,
            s.rel_tot_within_ss.sd
        ));
    }
    (csv, txt)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

/// Writes `report.json`, the two tables, per-algorithm worst-case payloads
/// and figures, and `timings.json` into `dir`.
pub fn persist(exp: &Experiment, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;

    let mut report_json = serde_json::to_vec_pretty(&exp.report)?;
    report_json.push(b'\n');
    write_atomic(&dir.join("report.json"), &report_json)?;

    let (csv, txt) = emit_table(&exp.report);
    write_atomic(&dir.join("table.csv"), csv.as_bytes())?;
    write_atomic(&dir.join("table.txt"), txt.as_bytes())?;

    for w in &exp.worst_cases {
        let mut payload = serde_json::to_vec_pretty(w)?;
        payload.push(b'\n');
        write_atomic(&dir.join(format!("worst_{}.json", w.algorithm)), &payload)?;
        let title = format!(
            "{} worst case (run {}, wrong {:.2}%)",
            w.display_name, w.run_index, w.wrong_clusters_pct
        );
        let figure = svg::worst_case_svg(&w.dataset, &w.clustering, &title);
        write_atomic(
            &dir.join(format!("worst_{}.svg", w.algorithm)),
            figure.as_bytes(),
        )?;
    }

    let mut timings = serde_json::to_vec_pretty(&exp.timings)?;
    timings.push(b'\n');
    write_atomic(&dir.join("timings.json"), &timings)?;
    Ok(())
}

/// Executes the experiment and persists everything to `spec.output_dir`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Experiment> {
    let exp = execute(spec)?;
    persist(&exp, &spec.output_dir)?;
    Ok(exp)
}

/// Optionally writes the per-run datasets (CSV + sidecar) under
/// `dir/datasets/`.
pub fn persist_datasets(spec: &ExperimentSpec, dir: &Path) -> Result<()> {
    let data_dir = dir.join("datasets");
    std::fs::create_dir_all(&data_dir)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", data_dir.display())))?;
    for run_index in 0..spec.runs {
        let mut gen = spec.gen.clone();
        gen.rng_seed = derive_seed(spec.master_seed, run_index as u64, DATASET_STREAM);
        let ld = datagen::generate::<f64>(&gen)?;
        datagen::write_files(&ld, &data_dir.join(format!("run_{run_index}.csv")))?;
    }
    Ok(())
}

/// Reads a persisted `report.json`.
pub fn load_report(dir: &Path) -> Result<ExperimentReport> {
    let path = dir.join("report.json");
    let raw = std::fs::read(&path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_slice(&raw)?)
}

/// Re-renders tables and figures in `dir` from the persisted results.
pub fn rerender(dir: &Path) -> Result<()> {
    let report = load_report(dir)?;
    let (csv, txt) = emit_table(&report);
    write_atomic(&dir.join("table.csv"), csv.as_bytes())?;
    write_atomic(&dir.join("table.txt"), txt.as_bytes())?;
    for s in &report.summaries {
        let path = dir.join(format!("worst_{}.json", s.algorithm));
        let raw = std::fs::read(&path)
            .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        let payload: WorstCasePayload = serde_json::from_slice(&raw)?;
        let title = format!(
            "{} worst case (run {}, wrong {:.2}%)",
            payload.display_name, payload.run_index, payload.wrong_clusters_pct
        );
        let figure = svg::worst_case_svg(&payload.dataset, &payload.clustering, &title);
        write_atomic(
            &dir.join(format!("worst_{}.svg", payload.algorithm)),
            figure.as_bytes(),
        )?;
    }
    Ok(())
}

/// The benchmark configurations of the experimental protocol, one experiment
/// per table: a grid-size sweep without noise, a noise sweep, a displacement
/// sweep and a cluster-size sweep (30 runs each). Heavyweight but complete;
/// subdirectory names encode the swept parameters.
pub fn paper_sweep(master_seed: u64, out_root: &Path, b: usize) -> Vec<ExperimentSpec> {
    let base = GenConfig {
        grid_rows: 8,
        grid_cols: 8,
        cluster_size: 40,
        radius: 1.0,
        noise_pct: 30.0,
        displacement_max: 0.0,
        rng_seed: 0,
    };
    let mut specs = Vec::new();
    let mut push = |gen: GenConfig, name: String| {
        specs.push(ExperimentSpec {
            gen,
            algorithms: SeedingMethod::all(b),
            runs: 30,
            master_seed,
            lloyd: LloydConfig::default(),
            output_dir: out_root.join(name),
        });
    };
    for g in 5..=10usize {
        let gen = GenConfig {
            grid_rows: g,
            grid_cols: g,
            noise_pct: 0.0,
            ..base.clone()
        };
        push(gen, format!("grid-{g}x{g}_n40_noise0_disp0"));
    }
    for noise in [10.0, 20.0, 30.0, 40.0, 50.0] {
        let gen = GenConfig {
            noise_pct: noise,
            ..base.clone()
        };
        push(gen, format!("grid-8x8_n40_noise{noise}_disp0"));
    }
    for disp in [0.5, 1.0, 2.0, 4.0] {
        let gen = GenConfig {
            displacement_max: disp,
            ..base.clone()
        };
        push(gen, format!("grid-8x8_n40_noise30_disp{disp}"));
    }
    for size in [12usize, 24, 48, 96] {
        let gen = GenConfig {
            cluster_size: size,
            displacement_max: 1.0,
            ..base.clone()
        };
        push(gen, format!("grid-8x8_n{size}_noise30_disp1"));
    }
    specs
}
