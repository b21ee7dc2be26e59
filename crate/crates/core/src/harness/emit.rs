//! Output files of a sweep.
//!
//! * `results.csv`: one line per [`ResultRow`] without its runtime, so the
//!   file depends on the configuration only. Columns are
//!   [`RESULTS_HEADER`]; empty cells mean "not computed", `error` is empty
//!   on success.
//! * `timings.csv`: scheduler wall-clock seconds per row, [`TIMINGS_HEADER`].
//! * `summary.csv`: one line per (workload, n, algorithm), [`SUMMARY_HEADER`].
//!   Ratios are objective over lower bound; `avg` is the ratio of sums.
//! * `plots/<workload>_<criterion>.dat`: whitespace-separated, one line per
//!   task count: `n` then `min avg max` for each algorithm (`NaN` when
//!   missing). Optionally `plots/plots.gp` renders them with gnuplot.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{RatioStats, RatioSummary, ResultRow, Workload};
use crate::algorithm::Algorithm;
use crate::error::{Error, Result};

pub const RESULTS_HEADER: [&str; 10] = [
    "workload",
    "n",
    "algorithm",
    "run",
    "seed",
    "makespan",
    "minsum",
    "cmax_bound",
    "minsum_bound",
    "error",
];

pub const TIMINGS_HEADER: [&str; 5] = ["workload", "n", "algorithm", "run", "runtime_s"];

pub const SUMMARY_HEADER: [&str; 11] = [
    "workload",
    "n",
    "algorithm",
    "runs",
    "failed",
    "makespan_min",
    "makespan_avg",
    "makespan_max",
    "minsum_min",
    "minsum_avg",
    "minsum_max",
];

#[derive(Serialize, Deserialize)]
struct ResultRecord {
    workload: Workload,
    n: usize,
    algorithm: Algorithm,
    run: usize,
    seed: u64,
    makespan: Option<f64>,
    minsum: Option<f64>,
    cmax_bound: Option<f64>,
    minsum_bound: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TimingRecord {
    workload: Workload,
    n: usize,
    algorithm: Algorithm,
    run: usize,
    runtime_s: f64,
}

#[derive(Serialize)]
struct SummaryRecord {
    workload: Workload,
    n: usize,
    algorithm: Algorithm,
    runs: usize,
    failed: usize,
    makespan_min: f64,
    makespan_avg: f64,
    makespan_max: f64,
    minsum_min: f64,
    minsum_avg: f64,
    minsum_max: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EmitOptions {
    /// Also write `plots/plots.gp`.
    pub gnuplot: bool,
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], records: impl Iterator<Item = T>) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    csv::Reader::from_path(path)
        .map_err(csv_err)?
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err)
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    write_csv(
        path,
        &RESULTS_HEADER,
        rows.iter().map(|r| ResultRecord {
            workload: r.workload,
            n: r.n,
            algorithm: r.algorithm,
            run: r.run,
            seed: r.seed,
            makespan: r.makespan,
            minsum: r.minsum,
            cmax_bound: r.cmax_bound,
            minsum_bound: r.minsum_bound,
            error: r.error.clone(),
        }),
    )
}

pub fn write_timings(path: &Path, rows: &[ResultRow]) -> Result<()> {
    write_csv(
        path,
        &TIMINGS_HEADER,
        rows.iter().map(|r| TimingRecord {
            workload: r.workload,
            n: r.n,
            algorithm: r.algorithm,
            run: r.run,
            runtime_s: r.runtime_s,
        }),
    )
}

/// Reads `results.csv`, filling runtimes from `timings` when given (rows
/// absent from it keep a runtime of 0).
pub fn read_results(results: &Path, timings: Option<&Path>) -> Result<Vec<ResultRow>> {
    let mut runtime = HashMap::new();
    if let Some(path) = timings {
        for t in read_csv::<TimingRecord>(path)? {
            runtime.insert((t.workload, t.n, t.algorithm, t.run), t.runtime_s);
        }
    }
    Ok(read_csv::<ResultRecord>(results)?
        .into_iter()
        .map(|r| ResultRow {
            runtime_s: runtime
                .get(&(r.workload, r.n, r.algorithm, r.run))
                .copied()
                .unwrap_or(0.0),
            workload: r.workload,
            n: r.n,
            algorithm: r.algorithm,
            run: r.run,
            seed: r.seed,
            makespan: r.makespan,
            minsum: r.minsum,
            cmax_bound: r.cmax_bound,
            minsum_bound: r.minsum_bound,
            error: r.error,
        })
        .collect())
}

pub fn write_summary(path: &Path, summary: &[RatioSummary]) -> Result<()> {
    write_csv(
        path,
        &SUMMARY_HEADER,
        summary.iter().map(|s| SummaryRecord {
            workload: s.workload,
            n: s.n,
            algorithm: s.algorithm,
            runs: s.runs,
            failed: s.failed,
            makespan_min: s.makespan.min,
            makespan_avg: s.makespan.avg,
            makespan_max: s.makespan.max,
            minsum_min: s.minsum.min,
            minsum_avg: s.minsum.avg,
            minsum_max: s.minsum.max,
        }),
    )
}

fn first_seen<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

const CRITERIA: [&str; 2] = ["makespan", "minsum"];

/// Writes one `.dat` file per (workload, criterion) into `dir` and returns
/// their paths, plus the gnuplot script when asked.
pub fn write_plots(dir: &Path, summary: &[RatioSummary], opts: EmitOptions) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let workloads = first_seen(summary.iter().map(|s| s.workload));
    let algorithms = first_seen(summary.iter().map(|s| s.algorithm));
    let mut written = Vec::new();
    let mut script = String::new();
    if opts.gnuplot {
        script.push_str("# gnuplot -c plots.gp, from inside this directory\n");
        script.push_str("set terminal pngcairo size 900,600\nset key outside right\n");
        script.push_str("set xlabel 'number of tasks'\nset logscale x 2\n");
        let names: Vec<&str> = algorithms.iter().map(|a| a.name()).collect();
        let _ = writeln!(script, "names = '{}'", names.join(" "));
    }

    for w in &workloads {
        let counts: BTreeSet<usize> = summary
            .iter()
            .filter(|s| s.workload == *w)
            .map(|s| s.n)
            .collect();
        for criterion in CRITERIA {
            let stats = |n: usize, a: Algorithm| -> Option<RatioStats> {
                summary
                    .iter()
                    .find(|s| s.workload == *w && s.n == n && s.algorithm == a)
                    .map(|s| if criterion == "makespan" { s.makespan } else { s.minsum })
            };
            let mut text = String::new();
            let _ = writeln!(text, "# workload {w}, {criterion} ratio to lower bound");
            let _ = write!(text, "# n");
            for a in &algorithms {
                let _ = write!(text, " {a}_min {a}_avg {a}_max");
            }
            text.push('\n');
            for &n in &counts {
                let _ = write!(text, "{n}");
                for &a in &algorithms {
                    match stats(n, a) {
                        Some(s) => {
                            let _ = write!(text, " {} {} {}", s.min, s.avg, s.max);
                        }
                        None => text.push_str(" NaN NaN NaN"),
                    }
                }
                text.push('\n');
            }
            let name = format!("{w}_{criterion}.dat");
            let path = dir.join(&name);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            written.push(path);

            if opts.gnuplot {
                let _ = writeln!(script, "\nset output '{w}_{criterion}.png'");
                let _ = writeln!(script, "set title '{w}: {criterion}'\nset ylabel '{criterion} ratio'");
                let _ = writeln!(
                    script,
                    "plot for [a=0:{}] '{name}' using 1:(column(3*a+3)):(column(3*a+2)):(column(3*a+4)) \
                     with yerrorlines title word(names, a+1)",
                    algorithms.len().saturating_sub(1)
                );
            }
        }
    }
    if opts.gnuplot {
        let path = dir.join("plots.gp");
        fs::write(&path, script).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Writes `results.csv`, `timings.csv`, `summary.csv` and `plots/` under
/// `out_dir`; returns every path written.
pub fn emit(
    rows: &[ResultRow],
    summary: &[RatioSummary],
    out_dir: &Path,
    opts: EmitOptions,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let results = out_dir.join("results.csv");
    let timings = out_dir.join("timings.csv");
    let summary_path = out_dir.join("summary.csv");
    write_results(&results, rows)?;
    write_timings(&timings, rows)?;
    write_summary(&summary_path, summary)?;
    let mut written = vec![results, timings, summary_path];
    written.extend(write_plots(&out_dir.join("plots"), summary, opts)?);
    Ok(written)
}
