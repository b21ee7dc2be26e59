//! Scheduling of moldable parallel tasks for makespan and weighted
//! completion time at once.
//!
//! The [`bicriteria`] module builds doubling batches filled by a knapsack
//! over task weights, then compacts them by list scheduling. [`cmax`] and
//! [`lp`] provide the lower bounds used to compute performance ratios,
//! [`baselines`] the comparison algorithms, [`generator`] synthetic
//! workloads and [`harness`] the experiment runner.

pub mod algorithm;
pub mod baselines;
pub mod bicriteria;
pub mod cmax;
pub mod error;
pub mod generator;
pub mod harness;
pub mod io;
pub mod list;
pub mod lp;
pub mod model;
pub mod rng;

pub use algorithm::{run_algorithm, AlgoParams, Algorithm};
pub use bicriteria::{schedule_bicriteria, BicriteriaParams};
pub use cmax::{canonical_allotment, cmax_lower_bound, CmaxBound};
pub use error::{Error, Result};
pub use lp::{minsum_lower_bound, MinsumBound};
pub use model::{
    evaluate, validate_schedule, Instance, MoldableTask, Objectives, Placement, Schedule, TaskId,
    ValidationReport, Violation,
};
