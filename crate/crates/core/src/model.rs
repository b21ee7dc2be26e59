//! Domain types for moldable tasks and schedules.
//!
//! A schedule assigns each task a start time and a processor *count*;
//! processor identities are never tracked. Feasibility means that at every
//! instant the counts of running tasks sum to at most `m`.

use std::fmt;

use crate::error::{Error, Result};

/// Dense task identifier, equal to the task's position in its instance.
pub type TaskId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct MoldableTask {
    pub id: TaskId,
    pub weight: f64,
    /// `profile[k - 1]` is the processing time on `k` processors.
    profile: Vec<f64>,
}

impl MoldableTask {
    pub fn new(id: TaskId, weight: f64, profile: Vec<f64>) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidInstance(format!(
                "task {id}: weight must be finite and positive, got {weight}"
            )));
        }
        if profile.is_empty() {
            return Err(Error::InvalidInstance(format!("task {id}: empty profile")));
        }
        if let Some(bad) = profile.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidInstance(format!(
                "task {id}: processing times must be finite and positive, got {bad}"
            )));
        }
        Ok(MoldableTask {
            id,
            weight,
            profile,
        })
    }

    /// Processing time on `k` processors, `1 <= k <= m`.
    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.profile[k - 1]
    }

    #[inline]
    pub fn area(&self, k: usize) -> f64 {
        k as f64 * self.profile[k - 1]
    }

    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub fn max_procs(&self) -> usize {
        self.profile.len()
    }

    pub fn min_time(&self) -> f64 {
        self.profile.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Nonincreasing time and nondecreasing work in the processor count.
    pub fn is_monotonic(&self) -> bool {
        self.profile.windows(2).enumerate().all(|(idx, w)| {
            let k = (idx + 1) as f64;
            w[1] <= w[0] && (k + 1.0) * w[1] >= k * w[0]
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    m: usize,
    tasks: Vec<MoldableTask>,
}

impl Instance {
    pub fn new(m: usize, tasks: Vec<MoldableTask>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInstance("processor count must be >= 1".into()));
        }
        if tasks.is_empty() {
            return Err(Error::InvalidInstance("instance has no tasks".into()));
        }
        for (idx, task) in tasks.iter().enumerate() {
            if task.id != idx {
                return Err(Error::InvalidInstance(format!(
                    "task ids must be 0..n-1 in order; position {idx} holds id {}",
                    task.id
                )));
            }
            if task.max_procs() != m {
                return Err(Error::InvalidInstance(format!(
                    "task {idx}: profile has {} entries, expected {m}",
                    task.max_procs()
                )));
            }
        }
        Ok(Instance { m, tasks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.tasks.len()
    }

    pub fn tasks(&self) -> &[MoldableTask] {
        &self.tasks
    }

    pub fn task(&self, id: TaskId) -> &MoldableTask {
        &self.tasks[id]
    }

    /// Smallest processing time over all tasks and allotments.
    pub fn t_min(&self) -> f64 {
        self.tasks
            .iter()
            .map(MoldableTask::min_time)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_monotonic(&self) -> bool {
        self.tasks.iter().all(MoldableTask::is_monotonic)
    }

    /// Same instance with every processing time multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let tasks = self
            .tasks
            .iter()
            .map(|t| {
                MoldableTask::new(
                    t.id,
                    t.weight,
                    t.profile.iter().map(|p| p * factor).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(self.m, tasks)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Placement {
    pub task: TaskId,
    pub start: f64,
    pub allot: usize,
}

impl Placement {
    pub fn new(task: TaskId, start: f64, allot: usize) -> Self {
        Placement { task, start, allot }
    }

    #[inline]
    pub fn completion(&self, instance: &Instance) -> f64 {
        self.start + instance.task(self.task).time(self.allot)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Schedule {
    pub placements: Vec<Placement>,
}

impl Schedule {
    pub fn new(placements: Vec<Placement>) -> Self {
        Schedule { placements }
    }

    /// Placements reordered by task id.
    pub fn sorted(mut self) -> Self {
        self.placements.sort_by_key(|p| p.task);
        self
    }

    pub fn placement(&self, task: TaskId) -> Option<&Placement> {
        self.placements.iter().find(|p| p.task == task)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Objectives {
    pub makespan: f64,
    pub minsum: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    UnknownTask(TaskId),
    Duplicate(TaskId),
    Missing(TaskId),
    AllotOutOfRange { task: TaskId, allot: usize },
    BadStart { task: TaskId, start: f64 },
    Overflow { time: f64, usage: usize, m: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownTask(t) => write!(f, "placement for unknown task {t}"),
            Violation::Duplicate(t) => write!(f, "task {t} placed more than once"),
            Violation::Missing(t) => write!(f, "task {t} not placed"),
            Violation::AllotOutOfRange { task, allot } => {
                write!(f, "task {task}: allotment {allot} out of range")
            }
            Violation::BadStart { task, start } => {
                write!(f, "task {task}: invalid start time {start}")
            }
            Violation::Overflow { time, usage, m } => {
                write!(f, "at t={time} usage {usage} > m={m}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the bijection between placements and tasks, allotment ranges and
/// resource feasibility. Resource usage is swept over the sorted start and
/// completion events; intervals are half-open, so a task completing at `t`
/// releases its processors before a task starting at `t` acquires them.
/// Only the first overflow instant is reported.
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> ValidationReport {
    let m = instance.m();
    let mut violations = Vec::new();
    let mut seen = vec![false; instance.n()];
    let mut events: Vec<(f64, isize)> = Vec::with_capacity(2 * schedule.placements.len());

    for p in &schedule.placements {
        if p.task >= instance.n() {
            violations.push(Violation::UnknownTask(p.task));
            continue;
        }
        if std::mem::replace(&mut seen[p.task], true) {
            violations.push(Violation::Duplicate(p.task));
            continue;
        }
        if p.allot == 0 || p.allot > m {
            violations.push(Violation::AllotOutOfRange {
                task: p.task,
                allot: p.allot,
            });
            continue;
        }
        if !(p.start.is_finite() && p.start >= 0.0) {
            violations.push(Violation::BadStart {
                task: p.task,
                start: p.start,
            });
            continue;
        }
        events.push((p.start, p.allot as isize));
        events.push((p.completion(instance), -(p.allot as isize)));
    }
    for (task, _) in seen.iter().enumerate().filter(|(_, s)| !**s) {
        violations.push(Violation::Missing(task));
    }

    // Releases sort before acquisitions at equal times.
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut usage: isize = 0;
    let mut idx = 0;
    while idx < events.len() {
        let time = events[idx].0;
        while idx < events.len() && events[idx].0 == time {
            usage += events[idx].1;
            idx += 1;
        }
        if usage > m as isize {
            violations.push(Violation::Overflow {
                time,
                usage: usage as usize,
                m,
            });
            break;
        }
    }

    ValidationReport { violations }
}

/// Makespan and weighted sum of completion times of a valid schedule.
pub fn evaluate(instance: &Instance, schedule: &Schedule) -> Result<Objectives> {
    let report = validate_schedule(instance, schedule);
    if !report.is_ok() {
        return Err(Error::InvalidSchedule(report));
    }
    Ok(objectives_unchecked(instance, schedule))
}

/// Objective values without the feasibility check. Placements are summed in
/// task-id order so the result does not depend on placement order.
pub(crate) fn objectives_unchecked(instance: &Instance, schedule: &Schedule) -> Objectives {
    let mut completions = vec![0.0; instance.n()];
    for p in &schedule.placements {
        completions[p.task] = p.completion(instance);
    }
    let makespan = completions.iter().copied().fold(0.0, f64::max);
    let minsum = completions
        .iter()
        .zip(instance.tasks())
        .map(|(c, t)| t.weight * c)
        .sum();
    Objectives { makespan, minsum }
}
