//! Count-based list scheduling.
//!
//! Jobs are taken in list order and each is started at the earliest instant
//! where its processor count stays available for its whole duration, given
//! the jobs already placed. A job may be a chain of tasks run back to back on
//! the same processors (a merged stack of sequential tasks).

use crate::model::{Instance, Placement, Schedule, TaskId};

/// Processor usage as a step function of time. `steps[i] = (t, u)` means
/// usage `u` on `[t, steps[i + 1].0)`; the last step extends to infinity.
#[derive(Clone, Debug)]
pub struct ResourceProfile {
    m: usize,
    steps: Vec<(f64, usize)>,
}

impl ResourceProfile {
    pub fn new(m: usize) -> Self {
        ResourceProfile {
            m,
            steps: vec![(0.0, 0)],
        }
    }

    pub fn usage_at(&self, t: f64) -> usize {
        let idx = self.steps.partition_point(|s| s.0 <= t);
        if idx == 0 {
            0
        } else {
            self.steps[idx - 1].1
        }
    }

    /// Earliest start `s >= 0` such that `allot` processors are free on
    /// `[s, end_at(s))`. Candidate starts are the step boundaries, since
    /// usage only drops there.
    pub fn earliest_fit(&self, allot: usize, end_at: impl Fn(f64) -> f64) -> f64 {
        assert!(allot <= self.m, "allotment {allot} exceeds m = {}", self.m);
        let cap = self.m - allot;
        let mut i = 0;
        'candidates: while i < self.steps.len() {
            if self.steps[i].1 > cap {
                i += 1;
                continue;
            }
            let start = self.steps[i].0;
            let end = end_at(start);
            let mut j = i + 1;
            while j < self.steps.len() && self.steps[j].0 < end {
                if self.steps[j].1 > cap {
                    i = j + 1;
                    continue 'candidates;
                }
                j += 1;
            }
            return start;
        }
        unreachable!("usage drops to zero after the last reservation")
    }

    /// Adds `allot` to the usage on `[start, end)`.
    pub fn reserve(&mut self, start: f64, end: f64, allot: usize) {
        if end <= start {
            return;
        }
        let lo = self.split_at(start);
        let hi = self.split_at(end);
        for step in &mut self.steps[lo..hi] {
            step.1 += allot;
            debug_assert!(step.1 <= self.m);
        }
    }

    /// Ensures a step boundary exists at `t` and returns its index.
    fn split_at(&mut self, t: f64) -> usize {
        let idx = self.steps.partition_point(|s| s.0 < t);
        if idx < self.steps.len() && self.steps[idx].0 == t {
            return idx;
        }
        let usage = self.steps[idx - 1].1;
        self.steps.insert(idx, (t, usage));
        idx
    }
}

/// One list entry: tasks executed consecutively on `allot` processors.
#[derive(Clone, Debug, PartialEq)]
pub struct ListJob {
    pub allot: usize,
    /// `(task, processing time)` in execution order.
    pub chain: Vec<(TaskId, f64)>,
}

impl ListJob {
    pub fn single(task: TaskId, allot: usize, time: f64) -> Self {
        ListJob {
            allot,
            chain: vec![(task, time)],
        }
    }

    /// Completion time of the chain started at `start`, accumulated member
    /// by member exactly as completions of the members are computed.
    pub fn end_at(&self, start: f64) -> f64 {
        self.chain.iter().fold(start, |t, &(_, p)| t + p)
    }

    pub fn duration(&self) -> f64 {
        self.chain.iter().map(|c| c.1).sum()
    }

    fn push_placements(&self, start: f64, out: &mut Vec<Placement>) {
        let mut t = start;
        for &(task, p) in &self.chain {
            out.push(Placement::new(task, t, self.allot));
            t += p;
        }
    }
}

/// List-schedules the jobs in order; returns the start time of each job and
/// the resulting schedule.
pub fn list_schedule(m: usize, jobs: &[ListJob]) -> (Vec<f64>, Schedule) {
    let mut profile = ResourceProfile::new(m);
    let mut starts = Vec::with_capacity(jobs.len());
    let mut placements = Vec::with_capacity(jobs.iter().map(|j| j.chain.len()).sum());
    for job in jobs {
        let start = profile.earliest_fit(job.allot, |s| job.end_at(s));
        profile.reserve(start, job.end_at(start), job.allot);
        job.push_placements(start, &mut placements);
        starts.push(start);
    }
    (starts, Schedule::new(placements))
}

/// Places jobs at given start times without any checks.
pub fn place_jobs(jobs: &[ListJob], starts: &[f64]) -> Schedule {
    let mut placements = Vec::new();
    for (job, &s) in jobs.iter().zip(starts) {
        job.push_placements(s, &mut placements);
    }
    Schedule::new(placements)
}

/// Graham list scheduling of single tasks with fixed allotments, `order`
/// being a permutation of the task ids.
pub fn graham_list(instance: &Instance, allotments: &[usize], order: &[TaskId]) -> Schedule {
    let jobs: Vec<ListJob> = order
        .iter()
        .map(|&id| {
            let k = allotments[id];
            ListJob::single(id, k, instance.task(id).time(k))
        })
        .collect();
    list_schedule(instance.m(), &jobs).1
}
