//! Experiment runner: generate instances per workload and task count,
//! compute both lower bounds once per instance, run every algorithm, and
//! aggregate performance ratios.

mod config;
mod emit;

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::algorithm::{run_algorithm, AlgoParams, Algorithm};
use crate::bicriteria::BicriteriaParams;
use crate::cmax::cmax_lower_bound;
use crate::error::{Error, Result};
use crate::generator::{gen_instance, WorkloadSpec};
use crate::lp::minsum_lower_bound;
use crate::model::evaluate;
use crate::rng::mix64;

pub use config::{ExperimentConfig, Workload};
pub use emit::{
    emit, read_results, write_plots, write_results, write_summary, write_timings, EmitOptions,
    RESULTS_HEADER, SUMMARY_HEADER, TIMINGS_HEADER,
};

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub workload: Workload,
    pub n: usize,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub makespan: Option<f64>,
    pub minsum: Option<f64>,
    pub cmax_bound: Option<f64>,
    pub minsum_bound: Option<f64>,
    /// Wall-clock seconds of the scheduler call alone.
    pub runtime_s: f64,
    /// Set when generation, a bound or the scheduler failed.
    pub error: Option<String>,
}

impl ResultRow {
    pub fn makespan_ratio(&self) -> Option<f64> {
        Some(self.makespan? / self.cmax_bound?)
    }

    pub fn minsum_ratio(&self) -> Option<f64> {
        Some(self.minsum? / self.minsum_bound?)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Instance seed: `mix64(mix64(mix64(base ^ fnv1a(tag)) ^ n) ^ run)` with
/// `mix64` the splitmix64 finalizer. Independent of the algorithm list.
pub fn point_seed(base_seed: u64, workload: Workload, n: usize, run: usize) -> u64 {
    let h = mix64(base_seed ^ fnv1a(workload.tag().as_bytes()));
    mix64(mix64(h ^ n as u64) ^ run as u64)
}

fn run_point(config: &ExperimentConfig, workload: Workload, n: usize, run: usize) -> Vec<ResultRow> {
    let seed = point_seed(config.base_seed, workload, n, run);
    let spec = WorkloadSpec {
        min_seq_time: config.min_seq_time,
        ..WorkloadSpec::new(n, config.m, workload.seq, workload.par, seed)
    };
    let row = |algorithm| ResultRow {
        workload,
        n,
        algorithm,
        run,
        seed,
        makespan: None,
        minsum: None,
        cmax_bound: None,
        minsum_bound: None,
        runtime_s: 0.0,
        error: None,
    };
    let instance = match gen_instance(&spec) {
        Ok(i) => i,
        Err(e) => {
            return config
                .algorithms
                .iter()
                .map(|&a| ResultRow {
                    error: Some(format!("generation: {e}")),
                    ..row(a)
                })
                .collect()
        }
    };
    let cmax_bound = cmax_lower_bound(&instance).value;
    let (minsum_bound, bound_error) = match minsum_lower_bound(&instance) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(format!("minsum bound: {e}"))),
    };
    let params = AlgoParams {
        bicriteria: BicriteriaParams {
            shuffle_rounds: config.shuffle_rounds,
            seed,
            ..BicriteriaParams::default()
        },
        ..AlgoParams::default()
    };

    config
        .algorithms
        .iter()
        .map(|&algo| {
            let start = Instant::now();
            let outcome = run_algorithm(algo, &instance, &params);
            let runtime_s = start.elapsed().as_secs_f64();
            let mut r = ResultRow {
                cmax_bound: Some(cmax_bound),
                minsum_bound,
                runtime_s,
                error: bound_error.clone(),
                ..row(algo)
            };
            match outcome.and_then(|s| evaluate(&instance, &s)) {
                Ok(o) => {
                    r.makespan = Some(o.makespan);
                    r.minsum = Some(o.minsum);
                }
                Err(e) => {
                    let msg = format!("{algo}: {e}");
                    r.error = Some(match r.error {
                        Some(prev) => format!("{prev}; {msg}"),
                        None => msg,
                    });
                }
            }
            r
        })
        .collect()
}

/// Runs the whole sweep. `jobs = 0` lets rayon pick the thread count.
/// Rows come out ordered by workload, task count and run (each in config
/// order), then algorithm, whatever the thread count.
pub fn run_experiment(config: &ExperimentConfig, jobs: usize) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let points: Vec<(Workload, usize, usize)> = config
        .workloads
        .iter()
        .flat_map(|&w| {
            config
                .task_counts
                .iter()
                .flat_map(move |&n| (0..config.runs_per_point).map(move |r| (w, n, r)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows: Vec<Vec<ResultRow>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(w, n, r)| run_point(config, w, n, r))
            .collect()
    });
    Ok(rows.concat())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioStats {
    /// Smallest per-run ratio.
    pub min: f64,
    /// `Σ objective / Σ bound` over the runs.
    pub avg: f64,
    /// Largest per-run ratio.
    pub max: f64,
}

impl RatioStats {
    fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        let ratios = pairs.iter().map(|(o, b)| o / b);
        let min = ratios.clone().fold(f64::INFINITY, f64::min);
        let max = ratios.fold(f64::NEG_INFINITY, f64::max);
        let obj: f64 = pairs.iter().map(|p| p.0).sum();
        let bound: f64 = pairs.iter().map(|p| p.1).sum();
        RatioStats {
            min,
            // rounding can push the weighted mean a hair outside [min, max]
            avg: (obj / bound).clamp(min, max),
            max,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioSummary {
    pub workload: Workload,
    pub n: usize,
    pub algorithm: Algorithm,
    /// Runs that entered the statistics.
    pub runs: usize,
    /// Runs skipped because of an error.
    pub failed: usize,
    pub makespan: RatioStats,
    pub minsum: RatioStats,
}

/// Groups rows by (workload, n, algorithm) in order of first appearance.
/// Rows carrying an error are counted as failed and left out; a point with
/// no successful run is dropped.
pub fn summarize(rows: &[ResultRow]) -> Result<Vec<RatioSummary>> {
    type Pairs = (Vec<(f64, f64)>, Vec<(f64, f64)>, usize);
    let mut keys = Vec::new();
    let mut groups: HashMap<(Workload, usize, Algorithm), Pairs> = HashMap::new();
    for r in rows {
        let key = (r.workload, r.n, r.algorithm);
        let g = groups.entry(key).or_insert_with(|| {
            keys.push(key);
            (Vec::new(), Vec::new(), 0)
        });
        match (r.error.is_none(), r.makespan, r.cmax_bound, r.minsum, r.minsum_bound) {
            (true, Some(mk), Some(cb), Some(ms), Some(mb)) => {
                if cb <= 0.0 || mb <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "zero lower bound at {} n={} run {}",
                        r.workload, r.n, r.run
                    )));
                }
                g.0.push((mk, cb));
                g.1.push((ms, mb));
            }
            _ => g.2 += 1,
        }
    }
    Ok(keys
        .into_iter()
        .filter_map(|key| {
            let (mk, ms, failed) = &groups[&key];
            (!mk.is_empty()).then(|| RatioSummary {
                workload: key.0,
                n: key.1,
                algorithm: key.2,
                runs: mk.len(),
                failed: *failed,
                makespan: RatioStats::from_pairs(mk),
                minsum: RatioStats::from_pairs(ms),
            })
        })
        .collect())
}
