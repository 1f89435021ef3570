use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Least-squares coefficients of `Σ_r C_r (log x)^r`.
///
/// `coefficients[r]` is `C_r` for `r = 0..=degree`; `C_0` is zero when the
/// constant column was excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub degree: usize,
    pub include_constant: bool,
    pub coefficients: Vec<f64>,
    /// RMS of `residual − fit` over the grid.
    pub rms: f64,
    /// RMS of the residual before fitting.
    pub input_rms: f64,
    /// Ratio of extreme singular values of the column-scaled design matrix.
    pub condition: f64,
}

impl LogFit {
    pub fn eval(&self, x: f64) -> f64 {
        let l = x.ln();
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * l + c)
    }
}

/// Singular values below this fraction of the largest one count as rank loss.
const RANK_TOLERANCE: f64 = 1e-13;

fn rms(v: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = v.fold((0.0, 0usize), |(s, c), x| (s + x * x, c + 1));
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    }
}

/// Fits `residual(x) ≈ Σ_{r} C_r (log x)^r` with `r` running over `1..=degree`,
/// or `0..=degree` when `include_constant` is set.
pub fn fit_log_powers(residuals: &[f64], x_grid: &[u64], degree: usize, include_constant: bool) -> Result<LogFit> {
    if residuals.len() != x_grid.len() {
        return Err(Error::Domain("residuals and grid differ in length".into()));
    }
    if x_grid.len() < degree + 2 {
        return Err(Error::Domain(format!("{} grid points cannot support degree {degree}", x_grid.len())));
    }
    let (lo, hi) = (x_grid[0] as f64, *x_grid.last().unwrap() as f64);
    if !(lo >= 1.0) || hi / lo < 100.0 {
        return Err(Error::Domain("grid must span at least two decades".into()));
    }
    let input_rms = rms(residuals.iter().copied());
    let first = usize::from(!include_constant);
    let cols = degree + 1 - first;
    let mut coefficients = vec![0.0; degree + 1];
    if cols == 0 {
        return Ok(LogFit { degree, include_constant, coefficients, rms: input_rms, input_rms, condition: 1.0 });
    }

    let logs: Vec<f64> = x_grid.iter().map(|&x| (x as f64).ln()).collect();
    let mut a = DMatrix::from_fn(x_grid.len(), cols, |i, j| logs[i].powi((j + first) as i32));
    let scales: Vec<f64> = (0..cols).map(|j| a.column(j).amax()).collect();
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).unscale_mut(*s);
    }
    let b = DVector::from_column_slice(residuals);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin / smax < RANK_TOLERANCE {
        return Err(Error::IllConditioned(format!("log-power design of degree {degree} is numerically singular")));
    }
    let solution = svd
        .solve(&b, RANK_TOLERANCE * smax)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    for j in 0..cols {
        coefficients[j + first] = solution[j] / scales[j];
    }
    let fit = LogFit { degree, include_constant, coefficients, rms: 0.0, input_rms, condition: smax / smin };
    let post = rms(residuals.iter().zip(x_grid).map(|(r, &x)| r - fit.eval(x as f64)));
    Ok(LogFit { rms: post, ..fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::geometric_grid;

    #[test]
    fn exact_recovery() {
        let grid = geometric_grid(1000, 1_000_000, 20).unwrap();
        let res: Vec<f64> = grid.iter().map(|&x| {
            let l = (x as f64).ln();
            3.0 * l * l + 2.0 * l
        }).collect();
        let fit = fit_log_powers(&res, &grid, 2, false).unwrap();
        assert!((fit.coefficients[1] - 2.0).abs() < 1e-9);
        assert!((fit.coefficients[2] - 3.0).abs() < 1e-10);
        assert_eq!(fit.coefficients[0], 0.0);
        assert!(fit.rms < 1e-9 * fit.input_rms);
    }

    #[test]
    fn zero_residual() {
        let grid = geometric_grid(1000, 100_000, 10).unwrap();
        let fit = fit_log_powers(&vec![0.0; grid.len()], &grid, 3, true).unwrap();
        assert!(fit.coefficients.iter().all(|&c| c == 0.0));
        assert_eq!(fit.rms, 0.0);
    }

    #[test]
    fn preconditions() {
        let grid = vec![1000, 2000, 5000];
        assert!(matches!(fit_log_powers(&[0.0; 3], &grid, 1, true), Err(Error::Domain(_))));
        let grid = vec![10, 100, 1000];
        assert!(matches!(fit_log_powers(&[0.0; 3], &grid, 3, true), Err(Error::Domain(_))));
        // repeated grid points make the design rank-deficient
        let grid = vec![10, 10, 10, 1000];
        assert!(matches!(fit_log_powers(&[1.0; 4], &grid, 2, true), Err(Error::IllConditioned(_))));
    }
}
