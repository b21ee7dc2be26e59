use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use moldsched::bicriteria::DEFAULT_SHUFFLE_ROUNDS;
use moldsched::generator::{gen_instance, ParModel, SeqModel, WorkloadSpec, DEFAULT_MIN_SEQ_TIME};
use moldsched::harness::{emit, run_experiment, summarize, EmitOptions, ExperimentConfig};
use moldsched::io::{read_instance, read_schedule, write_instance, write_schedule};
use moldsched::lp::{build_lp, minsum_bound};
use moldsched::{
    cmax_lower_bound, evaluate, run_algorithm, validate_schedule, AlgoParams, Algorithm,
    BicriteriaParams,
};

#[derive(Parser)]
#[command(name = "moldsched", version, about = "Moldable task scheduling for makespan and weighted completion time")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    Makespan,
    Minsum,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Sequential time model: uniform | mixed.
        #[arg(long)]
        seq: SeqModel,
        /// Parallelism model: high | weak | mixed.
        #[arg(long)]
        par: ParModel,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Gaussian sequential draws at or below this are redrawn.
        #[arg(long, default_value_t = DEFAULT_MIN_SEQ_TIME)]
        min_seq_time: f64,
    },
    /// Schedule an instance; prints `makespan minsum runtime_seconds`.
    Sched {
        /// bicriteria | gang | seq-lptf | list-shelf | list-wlptf | list-saf
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        instance: PathBuf,
        /// Batch-order shuffles tried by bicriteria.
        #[arg(long, default_value_t = DEFAULT_SHUFFLE_ROUNDS)]
        shuffles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Factor applied to the makespan bound before building batches.
        #[arg(long, default_value_t = 1.0)]
        cmax_scale: f64,
        /// Schedule file; defaults to `<instance>.<algo>.sched`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a lower bound on the chosen criterion.
    Bound {
        #[arg(long, value_enum)]
        criterion: Criterion,
        #[arg(long)]
        instance: PathBuf,
        /// Write the minsum linear program in plain text.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Run an experiment sweep and write its result files.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also write plots/plots.gp for gnuplot.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Check a schedule against an instance and print its objectives.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
}

fn default_schedule_path(instance: &Path, algo: Algorithm) -> PathBuf {
    let mut name = instance.as_os_str().to_owned();
    name.push(format!(".{algo}.sched"));
    PathBuf::from(name)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            n,
            m,
            seq,
            par,
            seed,
            out,
            min_seq_time,
        } => {
            let spec = WorkloadSpec {
                min_seq_time,
                ..WorkloadSpec::new(n, m, seq, par, seed)
            };
            let instance = gen_instance(&spec)?;
            write_instance(&out, &instance)?;
        }
        Command::Sched {
            algo,
            instance,
            shuffles,
            seed,
            cmax_scale,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let params = AlgoParams {
                bicriteria: BicriteriaParams {
                    shuffle_rounds: shuffles,
                    seed,
                    cmax_scale,
                },
                ..AlgoParams::default()
            };
            let start = Instant::now();
            let schedule = run_algorithm(algo, &inst, &params)?;
            let runtime = start.elapsed().as_secs_f64();
            let o = evaluate(&inst, &schedule)?;
            let out = out.unwrap_or_else(|| default_schedule_path(&instance, algo));
            write_schedule(&out, &schedule)?;
            println!("{} {} {runtime:.6}", o.makespan, o.minsum);
        }
        Command::Bound {
            criterion,
            instance,
            dump_lp,
        } => {
            let inst = read_instance(&instance)?;
            match criterion {
                Criterion::Makespan => {
                    if dump_lp.is_some() {
                        bail!("--dump-lp only applies to --criterion minsum");
                    }
                    println!("{}", cmax_lower_bound(&inst).value);
                }
                Criterion::Minsum => {
                    if let Some(path) = dump_lp {
                        let grid = moldsched::bicriteria::build_grid(&inst, cmax_lower_bound(&inst).value)?;
                        std::fs::write(&path, build_lp(&inst, &grid).dump())
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    println!("{}", minsum_bound(&inst)?.value);
                }
            }
        }
        Command::Bench {
            config,
            out_dir,
            jobs,
            gnuplot,
        } => {
            let config = ExperimentConfig::load(&config)?;
            let rows = run_experiment(&config, jobs)?;
            let summary = summarize(&rows)?;
            let files = emit(&rows, &summary, &out_dir, EmitOptions { gnuplot })?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            eprintln!(
                "{} rows ({failed} failed), {} files in {}",
                rows.len(),
                files.len(),
                out_dir.display()
            );
        }
        Command::Validate { instance, schedule } => {
            let inst = read_instance(&instance)?;
            let s = read_schedule(&schedule)?;
            let report = validate_schedule(&inst, &s);
            if !report.is_ok() {
                eprintln!("{report}");
                return Ok(ExitCode::FAILURE);
            }
            let o = evaluate(&inst, &s)?;
            println!("{} {}", o.makespan, o.minsum);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
