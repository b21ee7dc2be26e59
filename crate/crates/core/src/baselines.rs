//! Comparison algorithms: gang scheduling, sequential LPTF and list
//! scheduling over a two-shelf allotment with three list orders.

use crate::cmax::{canonical_allotment, cmax_lower_bound};
pub use crate::list::graham_list;
use crate::model::{Instance, Placement, Schedule, TaskId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ListOrder {
    /// Large shelf, then small shelf, then small tasks.
    ShelfOrder,
    /// Decreasing `w / p(k)`.
    WeightedLPTF,
    /// Increasing area `k · p(k)`.
    SmallestAreaFirst,
}

/// Class boundaries for [`ListOrder::ShelfOrder`], as fractions of the
/// makespan bound `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShelfThresholds {
    /// Tasks whose allotted time exceeds `large * λ` form the large shelf.
    pub large: f64,
    /// Tasks with `p(1) <= small * λ` are the small tasks.
    pub small: f64,
}

impl Default for ShelfThresholds {
    fn default() -> Self {
        ShelfThresholds {
            large: 0.5,
            small: 0.25,
        }
    }
}

fn by_key_then_id(keys: &[f64], descending: bool) -> Vec<TaskId> {
    let mut order: Vec<TaskId> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| {
        let c = keys[a].total_cmp(&keys[b]);
        let c = if descending { c.reverse() } else { c };
        c.then(a.cmp(&b))
    });
    order
}

/// Every task on all `m` processors, back to back by decreasing `w / p(m)`.
pub fn schedule_gang(instance: &Instance) -> Schedule {
    let m = instance.m();
    let ratios: Vec<f64> = instance
        .tasks()
        .iter()
        .map(|t| t.weight / t.time(m))
        .collect();
    let mut t = 0.0;
    let placements = by_key_then_id(&ratios, true)
        .into_iter()
        .map(|id| {
            let p = Placement::new(id, t, m);
            t += instance.task(id).time(m);
            p
        })
        .collect();
    Schedule::new(placements)
}

/// One processor per task, list order by decreasing `p(1)`.
pub fn schedule_sequential_lptf(instance: &Instance) -> Schedule {
    let times: Vec<f64> = instance.tasks().iter().map(|t| t.time(1)).collect();
    let order = by_key_then_id(&times, true);
    graham_list(instance, &vec![1; instance.n()], &order)
}

/// Allotment on the two shelves `λ` and `λ/2`: the smallest `k` with
/// `p(k) <= λ/2` when one exists, else the smallest with `p(k) <= λ`.
pub fn shelf_allotments(instance: &Instance) -> Vec<usize> {
    let lambda = cmax_lower_bound(instance).value;
    instance
        .tasks()
        .iter()
        .map(|t| {
            canonical_allotment(t, lambda / 2.0)
                .or_else(|| canonical_allotment(t, lambda))
                .expect("the makespan bound admits every task")
        })
        .collect()
}

pub fn list_order(
    instance: &Instance,
    allotments: &[usize],
    order: ListOrder,
    thresholds: ShelfThresholds,
) -> Vec<TaskId> {
    let tasks = instance.tasks();
    match order {
        ListOrder::ShelfOrder => {
            let lambda = cmax_lower_bound(instance).value;
            let class = |id: TaskId| -> u8 {
                let t = &tasks[id];
                if t.time(allotments[id]) > thresholds.large * lambda {
                    0
                } else if t.time(1) > thresholds.small * lambda {
                    1
                } else {
                    2
                }
            };
            let mut order: Vec<TaskId> = (0..tasks.len()).collect();
            order.sort_by_key(|&id| (class(id), id));
            order
        }
        ListOrder::WeightedLPTF => {
            let keys: Vec<f64> = tasks
                .iter()
                .map(|t| t.weight / t.time(allotments[t.id]))
                .collect();
            by_key_then_id(&keys, true)
        }
        ListOrder::SmallestAreaFirst => {
            let keys: Vec<f64> = tasks.iter().map(|t| t.area(allotments[t.id])).collect();
            by_key_then_id(&keys, false)
        }
    }
}

pub fn schedule_list_variant(instance: &Instance, order: ListOrder) -> Schedule {
    schedule_list_variant_with(instance, order, ShelfThresholds::default())
}

pub fn schedule_list_variant_with(
    instance: &Instance,
    order: ListOrder,
    thresholds: ShelfThresholds,
) -> Schedule {
    let allotments = shelf_allotments(instance);
    let order = list_order(instance, &allotments, order, thresholds);
    graham_list(instance, &allotments, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate, validate_schedule};
    use crate::test_util::{inst, random_instance};
    use std::cmp::Ordering;

    /// Weighted-shortest-processing-time value of sequencing all tasks on
    /// `k` processors each, one after another.
    fn wspt_sequence_minsum(instance: &Instance, k: usize) -> f64 {
        let mut jobs: Vec<(f64, f64)> = instance
            .tasks()
            .iter()
            .map(|t| (t.time(k), t.weight))
            .collect();
        jobs.sort_by(|a, b| (b.1 * a.0).partial_cmp(&(a.1 * b.0)).unwrap_or(Ordering::Equal));
        let mut clock = 0.0;
        jobs.iter()
            .map(|(p, w)| {
                clock += p;
                w * clock
            })
            .sum()
    }

    #[test]
    fn gang_examples() {
        let i = inst(3, &[(2.0, &[3.0, 2.0, 1.0])]);
        let s = schedule_gang(&i);
        assert_eq!(s.placements, vec![Placement::new(0, 0.0, 3)]);

        let i = inst(2, &[(1.0, &[4.0, 2.0]), (4.0, &[4.0, 2.0])]);
        let s = schedule_gang(&i);
        let c: Vec<f64> = s.placements.iter().map(|p| p.completion(&i)).collect();
        assert_eq!(s.placements[0].task, 1);
        assert_eq!(c, vec![2.0, 4.0]);
    }

    #[test]
    fn gang_is_wspt_on_linear_speedup() {
        let mut rng = crate::rng::Rng::seed_from_u64(4);
        for _ in 0..50 {
            let m = 1 + rng.below(8) as usize;
            let n = 1 + rng.below(10) as usize;
            let rows: Vec<(f64, Vec<f64>)> = (0..n)
                .map(|_| {
                    let p1 = rng.uniform(1.0, 10.0);
                    (rng.uniform(1.0, 10.0), (1..=m).map(|k| p1 / k as f64).collect())
                })
                .collect();
            let rows: Vec<(f64, &[f64])> = rows.iter().map(|r| (r.0, &r.1[..])).collect();
            let i = inst(m, &rows);
            let got = evaluate(&i, &schedule_gang(&i)).unwrap().minsum;
            let want = wspt_sequence_minsum(&i, m);
            assert!((got - want).abs() <= 1e-9 * want);
        }
    }

    #[test]
    fn sequential_lptf_examples() {
        let i = inst(2, &[(1.0, &[5.0, 5.0]), (1.0, &[3.0, 3.0]), (1.0, &[3.0, 3.0])]);
        let s = schedule_sequential_lptf(&i);
        let starts: Vec<f64> = (0..3).map(|t| s.placement(t).unwrap().start).collect();
        assert_eq!(starts, vec![0.0, 0.0, 3.0]);
        assert_eq!(evaluate(&i, &s).unwrap().makespan, 6.0);

        let i = inst(4, &[(1.0, &[5.0; 4]), (1.0, &[3.0; 4])]);
        let s = schedule_sequential_lptf(&i);
        assert!(s.placements.iter().all(|p| p.start == 0.0));
    }

    #[test]
    fn sequential_lptf_respects_classic_bounds() {
        for seed in 0..50 {
            let i = random_instance(seed, 15, 4);
            let o = evaluate(&i, &schedule_sequential_lptf(&i)).unwrap();
            let longest = i.tasks().iter().map(|t| t.time(1)).fold(0.0, f64::max);
            let total: f64 = i.tasks().iter().map(|t| t.time(1)).sum();
            assert!(o.makespan >= longest);
            assert!(o.makespan >= total / i.m() as f64 * (1.0 - 1e-12));
        }
    }

    #[test]
    fn variants_share_allotments() {
        let i = random_instance(12, 20, 8);
        let allot = shelf_allotments(&i);
        let mut orders = Vec::new();
        for o in [ListOrder::ShelfOrder, ListOrder::WeightedLPTF, ListOrder::SmallestAreaFirst] {
            let s = schedule_list_variant(&i, o);
            assert!(validate_schedule(&i, &s).is_ok());
            for p in &s.placements {
                assert_eq!(p.allot, allot[p.task]);
            }
            orders.push(list_order(&i, &allot, o, ShelfThresholds::default()));
        }
        assert_ne!(orders[1], orders[2]);
    }

    #[test]
    fn weighted_lptf_puts_heavy_task_first() {
        let i = inst(2, &[(1.0, &[4.0, 2.0]), (9.0, &[4.0, 2.0])]);
        let allot = shelf_allotments(&i);
        let order = list_order(&i, &allot, ListOrder::WeightedLPTF, ShelfThresholds::default());
        assert_eq!(order, vec![1, 0]);
    }

    #[test]
    fn shelf_order_classes() {
        // λ = 10: task 2 only fits the λ shelf and runs 6 > λ/2, task 1 sits
        // on the λ/2 shelf, task 0 is small (p(1) = 1 <= λ/4)
        let i = inst(1, &[(1.0, &[1.0]), (1.0, &[3.0]), (1.0, &[6.0])]);
        let allot = shelf_allotments(&i);
        assert_eq!(cmax_lower_bound(&i).value, 10.0);
        let order = list_order(&i, &allot, ListOrder::ShelfOrder, ShelfThresholds::default());
        assert_eq!(order, vec![2, 1, 0]);
    }

    #[test]
    fn smallest_area_first_order() {
        let i = inst(2, &[(1.0, &[4.0, 3.0]), (1.0, &[1.0, 1.0]), (1.0, &[2.0, 2.0])]);
        let allot = vec![2, 1, 1];
        let order = list_order(&i, &allot, ListOrder::SmallestAreaFirst, ShelfThresholds::default());
        assert_eq!(order, vec![1, 2, 0]);
    }
}
