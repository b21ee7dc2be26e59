//! Minsum lower bound from an interval-indexed linear relaxation.
//!
//! Time is cut at the doubling grid. Variable `x[i][j]` is the fraction of
//! task `i` completing in interval `j`, charged `w_i` times the interval's
//! left end. Completing by the interval's right end `r_j` costs the task at
//! least its smallest area among allotments with `p(k) <= r_j`, and all the
//! area of tasks done by `r_j` fits in `m·r_j`. Every feasible schedule maps
//! to a feasible 0/1 point whose cost does not exceed its weighted
//! completion time, so the relaxed optimum is a lower bound.
//!
//! Intervals are `(0, t_0]` (cost 0), the grid intervals `(t_j, t_{j+1}]`
//! for `j = 0..=K`, and a tail `(t_{K+1}, ∞)` that carries no surface row,
//! so schedules longer than the grid are covered too.

pub mod simplex;

use std::fmt::Write as _;

use crate::bicriteria::{build_grid, BatchGrid};
use crate::cmax::{cmax_lower_bound, min_area_within};
use crate::error::{Error, Result};
use crate::model::{Instance, TaskId};
use simplex::{Constraint, LinearProgram, Sense};

/// Absolute feasibility tolerance on returned solutions.
pub const FEASIBILITY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpInterval {
    /// Left end, used as the completion-time charge.
    pub left: f64,
    /// Right end; infinite for the tail.
    pub right: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpVar {
    pub task: TaskId,
    pub interval: usize,
    pub cost: f64,
    /// Smallest area of the task among allotments finishing by `right`.
    pub area: f64,
}

impl LpVar {
    pub fn name(&self) -> String {
        format!("x_{}_{}", self.task, self.interval)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpModel {
    pub m: usize,
    pub n: usize,
    pub intervals: Vec<LpInterval>,
    /// Variables ordered by interval, then task.
    pub vars: Vec<LpVar>,
}

impl LpModel {
    /// Area coefficient of `(task, interval)`, `None` when no allotment fits.
    pub fn area(&self, task: TaskId, interval: usize) -> Option<f64> {
        self.vars
            .iter()
            .find(|v| v.task == task && v.interval == interval)
            .map(|v| v.area)
    }

    /// Indices of the intervals that carry a surface row.
    fn surface_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.intervals.len()).filter(|&j| self.intervals[j].right.is_finite())
    }

    pub fn to_linear_program(&self) -> LinearProgram {
        let mut rows: Vec<Constraint> = (0..self.n)
            .map(|_| Constraint {
                coeffs: Vec::new(),
                sense: Sense::Ge,
                rhs: 1.0,
            })
            .collect();
        for (idx, v) in self.vars.iter().enumerate() {
            rows[v.task].coeffs.push((idx, 1.0));
        }
        for j in self.surface_rows() {
            let coeffs = self
                .vars
                .iter()
                .enumerate()
                .filter(|(_, v)| v.interval <= j)
                .map(|(idx, v)| (idx, v.area))
                .collect();
            rows.push(Constraint {
                coeffs,
                sense: Sense::Le,
                rhs: self.m as f64 * self.intervals[j].right,
            });
        }
        LinearProgram {
            objective: self.vars.iter().map(|v| v.cost).collect(),
            upper: vec![1.0; self.vars.len()],
            rows,
        }
    }

    /// Plain-text dump: a header, the column names, the dense objective row,
    /// then one sparse line per constraint (`name sense rhs  column:coef ...`).
    pub fn dump(&self) -> String {
        let lp = self.to_linear_program();
        let mut out = String::new();
        let _ = writeln!(out, "# minsum lp relaxation: minimize obj . x, 0 <= x <= 1");
        let _ = writeln!(out, "# intervals (index left right):");
        for (j, iv) in self.intervals.iter().enumerate() {
            let _ = writeln!(out, "#   {j} {} {}", iv.left, iv.right);
        }
        let _ = writeln!(out, "m {} n {} vars {} rows {}", self.m, self.n, lp.num_vars(), lp.rows.len());
        let names: Vec<String> = self.vars.iter().map(LpVar::name).collect();
        let _ = writeln!(out, "columns {}", names.join(" "));
        let obj: Vec<String> = lp.objective.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "obj {}", obj.join(" "));
        let surface: Vec<usize> = self.surface_rows().collect();
        for (r, row) in lp.rows.iter().enumerate() {
            let name = if r < self.n {
                format!("cover_{r}")
            } else {
                format!("surface_{}", surface[r - self.n])
            };
            let sense = match row.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            let _ = write!(out, "{name} {sense} {} ", row.rhs);
            for &(j, a) in &row.coeffs {
                let _ = write!(out, " {}:{a}", names[j]);
            }
            out.push('\n');
        }
        out
    }
}

pub fn build_lp(instance: &Instance, grid: &BatchGrid) -> LpModel {
    let mut intervals = vec![LpInterval {
        left: 0.0,
        right: grid.boundaries[0],
    }];
    intervals.extend(grid.boundaries.windows(2).map(|w| LpInterval {
        left: w[0],
        right: w[1],
    }));
    intervals.push(LpInterval {
        left: *grid.boundaries.last().expect("grid has boundaries"),
        right: f64::INFINITY,
    });

    let mut vars = Vec::new();
    for (j, iv) in intervals.iter().enumerate() {
        for task in instance.tasks() {
            if let Some(area) = min_area_within(task, iv.right) {
                vars.push(LpVar {
                    task: task.id,
                    interval: j,
                    cost: task.weight * iv.left,
                    area,
                });
            }
        }
    }
    LpModel {
        m: instance.m(),
        n: instance.n(),
        intervals,
        vars,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome {
    pub objective: f64,
    /// Value of each model variable, in model order.
    pub x: Vec<f64>,
    pub iterations: usize,
}

pub fn solve_lp(model: &LpModel) -> Result<LpOutcome> {
    let lp = model.to_linear_program();
    let sol = simplex::solve(&lp)?;
    let violation = lp.max_violation(&sol.x);
    if violation > FEASIBILITY_TOL {
        return Err(Error::InvalidArgument(format!(
            "simplex returned a point violating constraints by {violation}"
        )));
    }
    Ok(LpOutcome {
        objective: sol.objective,
        x: sol.x,
        iterations: sol.iterations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinsumBound {
    pub value: f64,
    pub lp_objective: f64,
    /// `Σ w_i · min_k p_i(k)`.
    pub trivial: f64,
}

pub fn minsum_bound(instance: &Instance) -> Result<MinsumBound> {
    let grid = build_grid(instance, cmax_lower_bound(instance).value)?;
    let model = build_lp(instance, &grid);
    let lp_objective = solve_lp(&model)?.objective;
    let trivial = instance
        .tasks()
        .iter()
        .map(|t| t.weight * t.min_time())
        .sum::<f64>();
    Ok(MinsumBound {
        value: lp_objective.max(trivial),
        lp_objective,
        trivial,
    })
}

pub fn minsum_lower_bound(instance: &Instance) -> Result<f64> {
    minsum_bound(instance).map(|b| b.value)
}
