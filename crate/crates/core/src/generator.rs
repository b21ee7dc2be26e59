//! Synthetic moldable workloads.
//!
//! Generation of an instance draws, from a single [`Rng`] seeded with the
//! spec seed and in this order: the `n` sequential times, then each task's
//! speedup factors (task by task), then the `n` weights.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Instance, MoldableTask};
use crate::rng::Rng;

pub const DEFAULT_MIN_SEQ_TIME: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeqModel {
    /// `p(1) ~ U[1, 10]`.
    Uniform1to10,
    /// 70% small tasks `N(1, 0.5)`, 30% large tasks `N(10, 5)`.
    MixedGaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParModel {
    Highly,
    Weakly,
    /// Small tasks weakly parallel, large tasks highly parallel.
    MixedByClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Speedup {
    Highly,
    Weakly,
}

impl Speedup {
    /// Mean of the speedup factor `X`; the standard deviation is 0.2.
    fn mean(self) -> f64 {
        match self {
            Speedup::Highly => 0.9,
            Speedup::Weakly => 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskClass {
    Small,
    Large,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkloadSpec {
    pub n: usize,
    pub m: usize,
    pub seq_model: SeqModel,
    pub par_model: ParModel,
    pub seed: u64,
    /// Gaussian sequential draws at or below this value are redrawn.
    pub min_seq_time: f64,
}

impl WorkloadSpec {
    pub fn new(n: usize, m: usize, seq_model: SeqModel, par_model: ParModel, seed: u64) -> Self {
        WorkloadSpec {
            n,
            m,
            seq_model,
            par_model,
            seed,
            min_seq_time: DEFAULT_MIN_SEQ_TIME,
        }
    }
}

pub const SMALL_FRACTION: f64 = 0.7;
const SPEEDUP_STD_DEV: f64 = 0.2;

pub fn draw_sequential(model: SeqModel, min_seq_time: f64, rng: &mut Rng) -> (f64, TaskClass) {
    match model {
        SeqModel::Uniform1to10 => {
            let p = rng.uniform(1.0, 10.0);
            let class = if p < 5.5 {
                TaskClass::Small
            } else {
                TaskClass::Large
            };
            (p, class)
        }
        SeqModel::MixedGaussian => {
            let (class, mean, sd) = if rng.next_f64() < SMALL_FRACTION {
                (TaskClass::Small, 1.0, 0.5)
            } else {
                (TaskClass::Large, 10.0, 5.0)
            };
            loop {
                let p = rng.normal(mean, sd);
                if p > min_seq_time.max(0.0) {
                    return (p, class);
                }
            }
        }
    }
}

pub fn gen_sequential(spec: &WorkloadSpec, rng: &mut Rng) -> Vec<(f64, TaskClass)> {
    (0..spec.n)
        .map(|_| draw_sequential(spec.seq_model, spec.min_seq_time, rng))
        .collect()
}

/// `p(j) = p(j-1)·(X + j)/(1 + j)` for `j = 2..=m`, with `X` supplied by
/// `draw_x` and expected in `[0, 1]`.
pub fn extend_profile_with(p1: f64, m: usize, mut draw_x: impl FnMut() -> f64) -> Vec<f64> {
    let mut profile = Vec::with_capacity(m);
    profile.push(p1);
    for j in 2..=m {
        let x = draw_x();
        let prev = profile[j - 2];
        profile.push(prev * (x + j as f64) / (1.0 + j as f64));
    }
    profile
}

/// Speedup factors are `N(mean, 0.2)` redrawn until they land in `[0, 1]`.
pub fn extend_profile(p1: f64, speedup: Speedup, m: usize, rng: &mut Rng) -> Vec<f64> {
    extend_profile_with(p1, m, || loop {
        let x = rng.normal(speedup.mean(), SPEEDUP_STD_DEV);
        if (0.0..=1.0).contains(&x) {
            return x;
        }
    })
}

/// Speedup model used for each task, indexed by task id.
pub fn speedups(par_model: ParModel, classes: &[TaskClass]) -> Vec<Speedup> {
    classes
        .iter()
        .map(|c| match (par_model, c) {
            (ParModel::Highly, _) => Speedup::Highly,
            (ParModel::Weakly, _) => Speedup::Weakly,
            (ParModel::MixedByClass, TaskClass::Small) => Speedup::Weakly,
            (ParModel::MixedByClass, TaskClass::Large) => Speedup::Highly,
        })
        .collect()
}

/// Generated instance together with the class and speedup of each task.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub classes: Vec<TaskClass>,
    pub speedups: Vec<Speedup>,
}

pub fn gen_instance_detailed(spec: &WorkloadSpec) -> Result<GeneratedInstance> {
    if spec.n == 0 || spec.m == 0 {
        return Err(Error::InvalidArgument(format!(
            "workload needs n >= 1 and m >= 1, got n = {}, m = {}",
            spec.n, spec.m
        )));
    }
    let mut rng = Rng::seed_from_u64(spec.seed);
    let seq = gen_sequential(spec, &mut rng);
    let classes: Vec<TaskClass> = seq.iter().map(|s| s.1).collect();
    let speedups = speedups(spec.par_model, &classes);
    let profiles: Vec<Vec<f64>> = seq
        .iter()
        .zip(&speedups)
        .map(|(&(p1, _), &sp)| extend_profile(p1, sp, spec.m, &mut rng))
        .collect();
    let tasks = profiles
        .into_iter()
        .enumerate()
        .map(|(id, profile)| MoldableTask::new(id, rng.uniform(1.0, 10.0), profile))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratedInstance {
        instance: Instance::new(spec.m, tasks)?,
        classes,
        speedups,
    })
}

pub fn gen_instance(spec: &WorkloadSpec) -> Result<Instance> {
    gen_instance_detailed(spec).map(|g| g.instance)
}

impl fmt::Display for SeqModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeqModel::Uniform1to10 => "uniform",
            SeqModel::MixedGaussian => "mixed",
        })
    }
}

impl FromStr for SeqModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(SeqModel::Uniform1to10),
            "mixed" => Ok(SeqModel::MixedGaussian),
            _ => Err(Error::InvalidArgument(format!(
                "unknown sequential model `{s}` (uniform|mixed)"
            ))),
        }
    }
}

impl fmt::Display for ParModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParModel::Highly => "high",
            ParModel::Weakly => "weak",
            ParModel::MixedByClass => "mixed",
        })
    }
}

impl FromStr for ParModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high" => Ok(ParModel::Highly),
            "weak" => Ok(ParModel::Weakly),
            "mixed" => Ok(ParModel::MixedByClass),
            _ => Err(Error::InvalidArgument(format!(
                "unknown parallelism model `{s}` (high|weak|mixed)"
            ))),
        }
    }
}
