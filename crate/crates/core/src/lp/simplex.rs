//! Bounded-variable primal simplex.
//!
//! Revised simplex over `min c·x, A x (<=|>=|=) b, 0 <= x <= u` with a dense
//! explicit basis inverse, which suits the small dense programs built here.
//! Nonbasic variables sit at either bound. Phase one drives artificial
//! variables out; in phase two they are fixed to zero. Pricing is Dantzig's
//! rule, falling back to Bland's rule while pivots stay degenerate so the
//! method cannot cycle.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    /// Upper bound per variable, `f64::INFINITY` for none. Lower bounds are 0.
    pub upper: Vec<f64>,
    pub rows: Vec<Constraint>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Largest violation of any row or bound by `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(-v).max(v - self.upper[j]);
        }
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let gap = match row.sense {
                Sense::Le => lhs - row.rhs,
                Sense::Ge => row.rhs - lhs,
                Sense::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(gap);
        }
        worst
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Basic,
    AtLower,
    AtUpper,
}

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 50;
const REFRESH_EVERY: usize = 64;

struct Tableau {
    rows: usize,
    /// Sparse columns of `[A | slacks | artificials]`.
    cols: Vec<Vec<(usize, f64)>>,
    upper: Vec<f64>,
    b: Vec<f64>,
    status: Vec<Status>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    /// Column-major basis inverse: entry `(k, i)` at `binv[i * rows + k]`.
    binv: Vec<f64>,
    /// Current value of every variable.
    x: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> (Self, usize, Vec<usize>) {
        let n = lp.num_vars();
        let rows = lp.rows.len();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (r, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                if a != 0.0 {
                    cols[j].push((r, a));
                }
            }
        }
        let mut upper = lp.upper.clone();
        let mut basis = vec![usize::MAX; rows];
        let mut artificials = Vec::new();

        for (r, row) in lp.rows.iter().enumerate() {
            let slack_sign = match row.sense {
                Sense::Le => Some(1.0),
                Sense::Ge => Some(-1.0),
                Sense::Eq => None,
            };
            if let Some(sign) = slack_sign {
                cols.push(vec![(r, sign)]);
                upper.push(f64::INFINITY);
                if row.rhs * sign >= 0.0 {
                    basis[r] = cols.len() - 1;
                }
            }
        }
        let first_artificial = cols.len();
        for (r, row) in lp.rows.iter().enumerate() {
            if basis[r] == usize::MAX {
                let sign = if row.rhs >= 0.0 { 1.0 } else { -1.0 };
                cols.push(vec![(r, sign)]);
                upper.push(f64::INFINITY);
                basis[r] = cols.len() - 1;
                artificials.push(cols.len() - 1);
            }
        }

        let total = cols.len();
        let mut status = vec![Status::AtLower; total];
        let mut x = vec![0.0; total];
        let mut binv = vec![0.0; rows * rows];
        for (r, &v) in basis.iter().enumerate() {
            status[v] = Status::Basic;
            let sign = cols[v][0].1;
            binv[r * rows + r] = 1.0 / sign;
            x[v] = lp.rows[r].rhs / sign;
        }
        let max_iterations = 50 * (total + rows).max(1);
        let t = Tableau {
            rows,
            cols,
            upper,
            b: lp.rows.iter().map(|r| r.rhs).collect(),
            status,
            basis,
            binv,
            x,
            iterations: 0,
            max_iterations,
        };
        (t, first_artificial, artificials)
    }

    fn binv_col(&self, i: usize) -> &[f64] {
        &self.binv[i * self.rows..(i + 1) * self.rows]
    }

    /// `B⁻¹ a_q` for a sparse column.
    fn ftran(&self, q: usize) -> Vec<f64> {
        let mut alpha = vec![0.0; self.rows];
        for &(i, v) in &self.cols[q] {
            for (a, &b) in alpha.iter_mut().zip(self.binv_col(i)) {
                *a += v * b;
            }
        }
        alpha
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let cb: Vec<f64> = self.basis.iter().map(|&v| cost[v]).collect();
        (0..self.rows)
            .map(|i| cb.iter().zip(self.binv_col(i)).map(|(c, b)| c * b).sum())
            .collect()
    }

    fn reduced_cost(&self, j: usize, cost: &[f64], y: &[f64]) -> f64 {
        cost[j] - self.cols[j].iter().map(|&(i, v)| y[i] * v).sum::<f64>()
    }

    /// Recomputes basic values from the nonbasic ones.
    fn refresh_basic_values(&mut self) {
        let mut rhs = self.b.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if self.status[j] != Status::Basic && self.x[j] != 0.0 {
                for &(i, v) in col {
                    rhs[i] -= v * self.x[j];
                }
            }
        }
        for k in 0..self.rows {
            let mut s = 0.0;
            for (i, r) in rhs.iter().enumerate() {
                s += self.binv[i * self.rows + k] * r;
            }
            self.x[self.basis[k]] = s;
        }
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination with partial
    /// pivoting.
    fn reinvert(&mut self) -> Result<()> {
        let r = self.rows;
        // dense B, column-major, augmented with identity
        let mut a = vec![0.0; r * r];
        for (k, &v) in self.basis.iter().enumerate() {
            for &(i, val) in &self.cols[v] {
                a[k * r + i] = val;
            }
        }
        let mut inv = vec![0.0; r * r];
        for i in 0..r {
            inv[i * r + i] = 1.0;
        }
        // Work row-wise on the transposed views: at(row, col) = a[col * r + row].
        for c in 0..r {
            let p = (c..r)
                .max_by(|&x, &y| a[c * r + x].abs().total_cmp(&a[c * r + y].abs()))
                .unwrap_or(c);
            if a[c * r + p].abs() < 1e-12 {
                return Err(Error::InvalidArgument("singular basis".into()));
            }
            if p != c {
                for col in 0..r {
                    a.swap(col * r + p, col * r + c);
                    inv.swap(col * r + p, col * r + c);
                }
            }
            let piv = a[c * r + c];
            for col in 0..r {
                a[col * r + c] /= piv;
                inv[col * r + c] /= piv;
            }
            for row in 0..r {
                if row == c {
                    continue;
                }
                let f = a[c * r + row];
                if f != 0.0 {
                    for col in 0..r {
                        a[col * r + row] -= f * a[col * r + c];
                        inv[col * r + row] -= f * inv[col * r + c];
                    }
                }
            }
        }
        self.binv = inv;
        Ok(())
    }

    fn pivot(&mut self, p: usize, alpha: &[f64]) {
        let r = self.rows;
        let ap = alpha[p];
        for i in 0..r {
            let col = &mut self.binv[i * r..(i + 1) * r];
            let piv = col[p] / ap;
            if piv != 0.0 {
                for (k, v) in col.iter_mut().enumerate() {
                    *v -= alpha[k] * piv;
                }
            }
            col[p] = piv;
        }
    }

    /// Runs simplex iterations for `cost` until optimal.
    fn optimize(&mut self, cost: &[f64]) -> Result<()> {
        let scale = cost.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        let dj_tol = 1e-9 * scale;
        let mut degenerate = 0usize;
        let mut since_refresh = 0usize;
        let mut verified = false;

        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::IterationLimit(self.max_iterations));
            }
            let y = self.duals(cost);
            let bland = degenerate >= DEGENERATE_STREAK;

            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.cols.len() {
                let st = self.status[j];
                if st == Status::Basic || self.upper[j] == 0.0 {
                    continue;
                }
                let d = self.reduced_cost(j, cost, &y);
                let improving = (st == Status::AtLower && d < -dj_tol)
                    || (st == Status::AtUpper && d > dj_tol);
                if !improving {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.is_none_or(|(_, best)| d.abs() > best.abs()) {
                    entering = Some((j, d));
                }
            }

            let Some((q, _)) = entering else {
                if verified {
                    return Ok(());
                }
                // Confirm optimality on a freshly inverted basis.
                self.reinvert()?;
                self.refresh_basic_values();
                verified = true;
                continue;
            };
            verified = false;

            let alpha = self.ftran(q);
            let dir = if self.status[q] == Status::AtLower { 1.0 } else { -1.0 };

            // Ratio test. Basic variable k moves by -theta * dir * alpha[k].
            let mut theta = self.upper[q];
            let mut leave: Option<(usize, Status)> = None;
            let mut best_pivot = 0.0f64;
            for (k, &a) in alpha.iter().enumerate() {
                let rate = dir * a;
                if rate.abs() <= PIVOT_TOL {
                    continue;
                }
                let v = self.basis[k];
                let (room, to) = if rate > 0.0 {
                    (self.x[v].max(0.0), Status::AtLower)
                } else if self.upper[v].is_finite() {
                    ((self.upper[v] - self.x[v]).max(0.0), Status::AtUpper)
                } else {
                    continue;
                };
                let ratio = room / rate.abs();
                let better = match leave {
                    None => ratio < theta,
                    Some((lk, _)) => {
                        if ratio < theta - FEAS_TOL {
                            true
                        } else if ratio <= theta + FEAS_TOL {
                            if bland {
                                v < self.basis[lk]
                            } else {
                                rate.abs() > best_pivot
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    theta = theta.min(ratio);
                    leave = Some((k, to));
                    best_pivot = rate.abs();
                }
            }
            if let Some((k, _)) = leave {
                let v = self.basis[k];
                let rate = dir * alpha[k];
                theta = if rate > 0.0 {
                    self.x[v].max(0.0) / rate
                } else {
                    (self.upper[v] - self.x[v]).max(0.0) / -rate
                };
            }
            if theta.is_infinite() {
                return Err(Error::Unbounded);
            }

            for (&v, &a) in self.basis.iter().zip(&alpha) {
                self.x[v] -= theta * dir * a;
            }
            self.x[q] += theta * dir;
            self.iterations += 1;
            degenerate = if theta <= FEAS_TOL { degenerate + 1 } else { 0 };

            match leave {
                None => {
                    // bound flip
                    self.status[q] = if dir > 0.0 {
                        self.x[q] = self.upper[q];
                        Status::AtUpper
                    } else {
                        self.x[q] = 0.0;
                        Status::AtLower
                    };
                }
                Some((k, to)) => {
                    let v = self.basis[k];
                    self.x[v] = if to == Status::AtLower { 0.0 } else { self.upper[v] };
                    self.status[v] = to;
                    self.status[q] = Status::Basic;
                    self.basis[k] = q;
                    self.pivot(k, &alpha);
                }
            }

            since_refresh += 1;
            if since_refresh >= REFRESH_EVERY {
                self.refresh_basic_values();
                since_refresh = 0;
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_vars();
    assert_eq!(lp.upper.len(), n, "one upper bound per variable");
    let (mut t, first_artificial, artificials) = Tableau::new(lp);
    let total = t.cols.len();

    if !artificials.is_empty() {
        let mut phase_one = vec![0.0; total];
        for &a in &artificials {
            phase_one[a] = 1.0;
        }
        t.optimize(&phase_one)?;
        let infeasibility: f64 = artificials.iter().map(|&a| t.x[a]).sum();
        let scale = lp.rows.iter().fold(1.0f64, |m, r| m.max(r.rhs.abs()));
        if infeasibility > 1e-9 * scale {
            return Err(Error::Infeasible);
        }
        for a in first_artificial..total {
            t.upper[a] = 0.0;
            if t.status[a] != Status::Basic {
                t.x[a] = 0.0;
                t.status[a] = Status::AtLower;
            }
        }
    }

    let mut cost = lp.objective.clone();
    cost.resize(total, 0.0);
    t.optimize(&cost)?;

    let x: Vec<f64> = t.x[..n].iter().map(|v| v.max(0.0)).collect();
    let objective = x.iter().zip(&lp.objective).map(|(a, c)| a * c).sum();
    Ok(LpSolution {
        objective,
        x,
        iterations: t.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn row(coeffs: &[(usize, f64)], sense: Sense, rhs: f64) -> Constraint {
        Constraint {
            coeffs: coeffs.to_vec(),
            sense,
            rhs,
        }
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let lp = LinearProgram {
            objective: vec![-3.0, -5.0],
            upper: vec![f64::INFINITY; 2],
            rows: vec![
                row(&[(0, 1.0)], Sense::Le, 4.0),
                row(&[(1, 2.0)], Sense::Le, 12.0),
                row(&[(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn needs_phase_one_and_bounds() {
        // min x + 2y st x + y >= 3, x <= 1 (bound), y <= 5 -> x=1, y=2, obj 5
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            upper: vec![1.0, 5.0],
            rows: vec![row(&[(0, 1.0), (1, 1.0)], Sense::Ge, 3.0)],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective - 5.0).abs() < 1e-9);
    }

    #[test]
    fn equality_rows() {
        // min -x - y st x + y = 2, x - y = 0
        let lp = LinearProgram {
            objective: vec![-1.0, -1.0],
            upper: vec![f64::INFINITY; 2],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0)], Sense::Eq, 2.0),
                row(&[(0, 1.0), (1, -1.0)], Sense::Eq, 0.0),
            ],
        };
        let s = solve(&lp).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-9 && (s.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let lp = LinearProgram {
            objective: vec![1.0],
            upper: vec![1.0],
            rows: vec![row(&[(0, 1.0)], Sense::Ge, 2.0)],
        };
        assert!(matches!(solve(&lp), Err(Error::Infeasible)));

        let lp = LinearProgram {
            objective: vec![-1.0],
            upper: vec![f64::INFINITY],
            rows: vec![row(&[(0, 1.0)], Sense::Ge, 1.0)],
        };
        assert!(matches!(solve(&lp), Err(Error::Unbounded)));
    }

    /// Every vertex of a box-constrained 2-variable program lies on two
    /// active constraints; enumerate their intersections.
    fn vertex_enumeration(lp: &LinearProgram) -> f64 {
        let mut lines: Vec<(f64, f64, f64)> = lp
            .rows
            .iter()
            .map(|r| {
                let mut a = [0.0; 2];
                for &(j, v) in &r.coeffs {
                    a[j] += v;
                }
                (a[0], a[1], r.rhs)
            })
            .collect();
        lines.extend([(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (1.0, 0.0, lp.upper[0]), (0.0, 1.0, lp.upper[1])]);
        let mut best = f64::INFINITY;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a, b, e) = lines[i];
                let (c, d, f) = lines[j];
                let det = a * d - b * c;
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = [(e * d - b * f) / det, (a * f - e * c) / det];
                if lp.max_violation(&x) <= 1e-9 {
                    best = best.min(lp.objective[0] * x[0] + lp.objective[1] * x[1]);
                }
            }
        }
        best
    }

    #[test]
    fn matches_vertex_enumeration() {
        let mut rng = Rng::seed_from_u64(2);
        let mut solved = 0;
        for _ in 0..300 {
            let rows = (0..1 + rng.below(4))
                .map(|_| {
                    let sense = match rng.below(3) {
                        0 => Sense::Le,
                        1 => Sense::Ge,
                        _ => Sense::Eq,
                    };
                    row(
                        &[(0, rng.uniform(-3.0, 3.0)), (1, rng.uniform(-3.0, 3.0))],
                        sense,
                        rng.uniform(-4.0, 4.0),
                    )
                })
                .collect();
            let lp = LinearProgram {
                objective: vec![rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)],
                upper: vec![rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0)],
                rows,
            };
            let oracle = vertex_enumeration(&lp);
            match solve(&lp) {
                Ok(s) => {
                    assert!(lp.max_violation(&s.x) <= 1e-7);
                    assert!((s.objective - oracle).abs() <= 1e-7 * (1.0 + oracle.abs()));
                    solved += 1;
                }
                Err(Error::Infeasible) => assert!(oracle.is_infinite()),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(solved > 50);
    }
}
