//! Experiment configuration, read from a TOML key-value file:
//!
//! ```toml
//! m = 200
//! task_counts = [25, 50, 100, 200, 400]
//! runs_per_point = 40
//! workloads = ["uniform-weak", "uniform-high", "mixed-mixed", "uniform-mixed"]
//! algorithms = ["bicriteria", "gang", "seq-lptf", "list-shelf", "list-wlptf", "list-saf"]
//! base_seed = 1
//! shuffle_rounds = 10
//! min_seq_time = 0.01
//! ```
//!
//! Every key is optional and falls back to the value shown.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algorithm::Algorithm;
use crate::bicriteria::DEFAULT_SHUFFLE_ROUNDS;
use crate::error::{Error, Result};
use crate::generator::{ParModel, SeqModel, DEFAULT_MIN_SEQ_TIME};

/// A sequential-time model paired with a parallelism model, written
/// `<seq>-<par>` (e.g. `uniform-weak`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Workload {
    pub seq: SeqModel,
    pub par: ParModel,
}

impl Workload {
    pub const fn new(seq: SeqModel, par: ParModel) -> Self {
        Workload { seq, par }
    }

    pub fn tag(&self) -> String {
        self.to_string()
    }

    pub const DEFAULTS: [Workload; 4] = [
        Workload::new(SeqModel::Uniform1to10, ParModel::Weakly),
        Workload::new(SeqModel::Uniform1to10, ParModel::Highly),
        Workload::new(SeqModel::MixedGaussian, ParModel::MixedByClass),
        Workload::new(SeqModel::Uniform1to10, ParModel::MixedByClass),
    ];
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.seq, self.par)
    }
}

impl FromStr for Workload {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (seq, par) = s
            .split_once('-')
            .ok_or_else(|| Error::InvalidArgument(format!("workload `{s}` is not <seq>-<par>")))?;
        Ok(Workload::new(seq.parse()?, par.parse()?))
    }
}

impl TryFrom<String> for Workload {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Workload> for String {
    fn from(w: Workload) -> String {
        w.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: usize,
    pub task_counts: Vec<usize>,
    pub runs_per_point: usize,
    pub workloads: Vec<Workload>,
    pub algorithms: Vec<Algorithm>,
    pub base_seed: u64,
    pub shuffle_rounds: usize,
    pub min_seq_time: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            m: 200,
            task_counts: vec![25, 50, 100, 200, 400],
            runs_per_point: 40,
            workloads: Workload::DEFAULTS.to_vec(),
            algorithms: Algorithm::ALL.to_vec(),
            base_seed: 1,
            shuffle_rounds: DEFAULT_SHUFFLE_ROUNDS,
            min_seq_time: DEFAULT_MIN_SEQ_TIME,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.m == 0 {
            return bad("m must be at least 1");
        }
        if self.task_counts.is_empty() || self.task_counts.contains(&0) {
            return bad("task_counts must be a non-empty list of positive counts");
        }
        if self.runs_per_point == 0 {
            return bad("runs_per_point must be at least 1");
        }
        if self.workloads.is_empty() {
            return bad("workloads must not be empty");
        }
        if self.algorithms.is_empty() {
            return bad("algorithms must not be empty");
        }
        if !(self.min_seq_time.is_finite() && self.min_seq_time >= 0.0) {
            return bad("min_seq_time must be a finite non-negative number");
        }
        Ok(())
    }
}
