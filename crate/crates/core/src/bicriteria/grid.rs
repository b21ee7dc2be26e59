use crate::error::{Error, Result};
use crate::model::Instance;

/// Doubling time grid `t_j = cmax_star · 2^(j - K)`.
///
/// `boundaries` holds `t_0 ..= t_{K+1}`; [`BatchGrid::t`] extends the grid
/// past `K + 1` for the extension batches.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchGrid {
    pub cmax_star: f64,
    pub t_min: f64,
    pub k: usize,
    pub boundaries: Vec<f64>,
}

impl BatchGrid {
    pub fn t(&self, j: usize) -> f64 {
        self.cmax_star * 2f64.powi(j as i32 - self.k as i32)
    }

    pub fn t0(&self) -> f64 {
        self.boundaries[0]
    }
}

pub fn build_grid(instance: &Instance, cmax_star: f64) -> Result<BatchGrid> {
    grid_for(instance.t_min(), cmax_star)
}

pub(crate) fn grid_for(t_min: f64, cmax_star: f64) -> Result<BatchGrid> {
    if !(t_min > 0.0 && t_min.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_min must be positive, got {t_min}")));
    }
    if !(cmax_star.is_finite() && cmax_star >= t_min) {
        return Err(Error::InvalidArgument(format!(
            "cmax_star = {cmax_star} is below t_min = {t_min}"
        )));
    }
    // floor(log2(ratio)), corrected so that t_0 lands in [t_min, 2 t_min)
    let mut k = (cmax_star / t_min).log2().floor().max(0.0) as i32;
    while k > 0 && cmax_star * 2f64.powi(-k) < t_min {
        k -= 1;
    }
    while cmax_star * 2f64.powi(-(k + 1)) >= t_min {
        k += 1;
    }
    let k = k as usize;
    let mut grid = BatchGrid {
        cmax_star,
        t_min,
        k,
        boundaries: Vec::with_capacity(k + 2),
    };
    grid.boundaries = (0..=k + 1).map(|j| grid.t(j)).collect();
    Ok(grid)
}
