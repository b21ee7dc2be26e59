//! Certified makespan lower bound.
//!
//! A horizon `λ` is *feasible* when every task can finish within `λ` on some
//! allotment and the sum of the tasks' smallest areas among allotments that
//! fit in `λ` is at most `m·λ`. Any schedule of makespan `C` makes `C`
//! feasible, so the smallest feasible horizon bounds the optimum from below.

use crate::model::{Instance, MoldableTask};

#[derive(Clone, Debug, PartialEq)]
pub struct CmaxBound {
    pub value: f64,
    /// Smallest allotment of each task whose processing time fits in `value`.
    pub canonical_allotments: Vec<usize>,
}

/// Smallest `k` with `p(k) <= deadline`.
pub fn canonical_allotment(task: &MoldableTask, deadline: f64) -> Option<usize> {
    task.profile()
        .iter()
        .position(|&p| p <= deadline)
        .map(|idx| idx + 1)
}

/// Smallest area `k·p(k)` over allotments with `p(k) <= deadline`.
pub fn min_area_within(task: &MoldableTask, deadline: f64) -> Option<f64> {
    task.profile()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p <= deadline)
        .map(|(idx, &p)| (idx + 1) as f64 * p)
        .reduce(f64::min)
}

/// Total minimal work at horizon `lambda`, or `None` when some task cannot
/// finish by `lambda` at all.
pub fn min_work(instance: &Instance, lambda: f64) -> Option<f64> {
    instance
        .tasks()
        .iter()
        .map(|t| min_area_within(t, lambda))
        .sum()
}

pub fn is_feasible_horizon(instance: &Instance, lambda: f64) -> bool {
    matches!(min_work(instance, lambda), Some(w) if w <= instance.m() as f64 * lambda)
}

/// Smallest feasible horizon.
///
/// The minimal work only changes at profile values, so between consecutive
/// distinct values `v_a < v_b` the smallest feasible horizon is
/// `max(v_a, W(v_a)/m)` when that is below `v_b`. Binary search locates the
/// first feasible profile value, then the gap just below it is checked.
pub fn cmax_lower_bound(instance: &Instance) -> CmaxBound {
    let m = instance.m() as f64;
    let mut values: Vec<f64> = instance
        .tasks()
        .iter()
        .flat_map(|t| t.profile().iter().copied())
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();

    let first_feasible = values.partition_point(|&v| !is_feasible_horizon(instance, v));
    let value = if first_feasible == values.len() {
        // Every task fits at the largest value; only the work bound remains.
        let last = *values.last().expect("instance has tasks");
        let work = min_work(instance, last).expect("every task fits at its largest time");
        work_ratio(work, m)
    } else if first_feasible == 0 {
        values[0]
    } else {
        let below = values[first_feasible - 1];
        match min_work(instance, below) {
            Some(work) if work_ratio(work, m) < values[first_feasible] => {
                work_ratio(work, m).max(below)
            }
            _ => values[first_feasible],
        }
    };

    let canonical_allotments = instance
        .tasks()
        .iter()
        .map(|t| canonical_allotment(t, value).expect("bound admits every task"))
        .collect();
    CmaxBound {
        value,
        canonical_allotments,
    }
}

/// Smallest double `c` with `m·c >= work`; plain division can land one ulp
/// short.
fn work_ratio(work: f64, m: f64) -> f64 {
    let mut c = work / m;
    while m * c < work {
        c = c.next_up();
    }
    c
}
