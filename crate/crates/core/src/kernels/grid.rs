use super::squared_euclidean;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::statistics::quantile;

/// Lower distance quantile used for bandwidth grids.
pub const DEFAULT_Q_LO: f64 = 0.05;
/// Upper distance quantile used for bandwidth grids.
pub const DEFAULT_Q_HI: f64 = 0.95;

/// `count` log-uniformly spaced values from `lo` to `hi`, endpoints included exactly.
/// A single point sits at the geometric mean.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::validation("grid needs at least one point"));
    }
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::validation(format!(
            "invalid grid range [{lo}, {hi}]: need 0 < lo <= hi < inf"
        )));
    }
    if count == 1 {
        return Ok(vec![(lo * hi).sqrt()]);
    }
    if lo == hi {
        return Ok(vec![lo; count]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = (count - 1) as f64;
    let mut grid: Vec<f64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / last).exp())
        .collect();
    grid[0] = lo;
    grid[count - 1] = hi;
    Ok(grid)
}

/// Quantum scaling parameters `γ`, log-uniform over `[lo, hi]`.
pub fn scaling_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    geometric_grid(lo, hi, count)
}

/// Bandwidths spanning the distance scales present in `z`.
///
/// Geometric grid between the `q_lo` and `q_hi` quantiles (finite-set
/// quantile, attained values) of the nonzero pairwise Euclidean distances.
pub fn bandwidth_grid(z: &Dataset, count: usize, q_lo: f64, q_hi: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::validation("bandwidth count must be at least 1"));
    }
    if !(0.0 < q_lo && q_lo < q_hi && q_hi < 1.0) {
        return Err(Error::validation(format!(
            "need 0 < q_lo < q_hi < 1, got ({q_lo}, {q_hi})"
        )));
    }
    let distances = nonzero_distances(z);
    if distances.is_empty() {
        return Err(Error::DegenerateData(
            "all pairwise distances are zero; cannot choose bandwidths".into(),
        ));
    }
    let lo = quantile(&distances, q_lo)?;
    let hi = quantile(&distances, q_hi)?;
    geometric_grid(lo, hi, count)
}

fn nonzero_distances(z: &Dataset) -> Vec<f64> {
    let n = z.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = squared_euclidean(z.row(i), z.row(j)).sqrt();
            if d > 0.0 {
                out.push(d);
            }
        }
    }
    out
}
