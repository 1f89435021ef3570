use rayon::prelude::*;
use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::multiplicative::{sieve_phi_theta, sieve_spf, theta_from_exponents, ExponentVector, SpfTable, ThetaSpec};
use crate::{Error, Result};

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MainTermKind {
    Power,
    Log,
}

/// `M_β(x) = x^{β+1}/(β+1)`, or `log x` when `β = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTerm {
    pub beta: f64,
}

impl MainTerm {
    pub fn new(beta: f64) -> Self {
        MainTerm { beta }
    }

    pub fn kind(&self) -> MainTermKind {
        if self.beta == -1.0 {
            MainTermKind::Log
        } else {
            MainTermKind::Power
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind() {
            MainTermKind::Log => x.ln(),
            MainTermKind::Power => x.powf(self.beta + 1.0) / (self.beta + 1.0),
        }
    }
}

/// Roughly `per_decade` points per factor of ten from `start` up to `end`,
/// rounded to integers and always ending at `end`.
pub fn geometric_grid(start: u64, end: u64, per_decade: u32) -> Result<Vec<u64>> {
    if start < 1 || end < start || per_decade == 0 {
        return Err(Error::Domain(format!("bad grid [{start}, {end}] with {per_decade} per decade")));
    }
    let step = 10f64.powf(1.0 / f64::from(per_decade));
    let mut grid = Vec::new();
    let mut j = 0i32;
    loop {
        let x = (start as f64 * step.powi(j)).round() as u64;
        if x >= end {
            break;
        }
        if grid.last() != Some(&x) {
            grid.push(x);
        }
        j += 1;
    }
    grid.push(end);
    Ok(grid)
}

fn check_grid(grid: &[u64]) -> Result<u64> {
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be non-empty, positive and strictly increasing".into()));
    }
    Ok(*grid.last().unwrap())
}

/// Prefix sums of `values[0..]` (indexed from `n = 1`) read at each grid point.
pub(crate) fn prefix_at(values: &[f64], grid: &[u64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = NeumaierSum::default();
    let mut next = 0;
    for (i, v) in values.iter().enumerate() {
        acc.add(*v);
        while next < grid.len() && grid[next] == i as u64 + 1 {
            out.push(acc.value());
            next += 1;
        }
    }
    out
}

/// `Π_{p|n}(1 + θ_p)` for every `n ≤ x` in floating point, from a table of
/// local factors indexed by `p`.
pub(crate) fn phi_theta_values(theta: &ThetaSpec, table: &SpfTable, x: u64) -> Vec<f64> {
    let mut local = vec![0.0f64; x as usize + 1];
    for &p in table.primes() {
        if u64::from(p) > x {
            break;
        }
        local[p as usize] = 1.0 + theta.theta_p_f64(u64::from(p));
    }
    (1..=x)
        .into_par_iter()
        .map(|n| {
            let mut v = 1.0;
            table.for_each_prime_factor(n, |p| v *= local[p as usize]);
            v
        })
        .collect()
}

/// `Σ_{n≤x} n^β φ_θ(n)` at every grid point, in compensated double precision.
pub fn summatory(theta: &ThetaSpec, beta: f64, grid: &[u64]) -> Result<Vec<f64>> {
    let x = check_grid(grid)?;
    let table = sieve_spf(x.max(2))?;
    let mut values = phi_theta_values(theta, &table, x);
    if beta != 0.0 {
        values.par_iter_mut().enumerate().for_each(|(i, v)| *v *= ((i + 1) as f64).powf(beta));
    }
    Ok(prefix_at(&values, grid))
}

/// `Σ_{n≤x} n^β φ_θ(n)` as exact rationals.
pub fn summatory_exact(theta: &ThetaSpec, beta: i32, grid: &[u64]) -> Result<Vec<Rational>> {
    let x = check_grid(grid)?;
    let values = sieve_phi_theta(theta, x)?;
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = Rational::new();
    let mut next = 0;
    for (i, v) in values.into_iter().enumerate() {
        let n = Rational::from(i as u64 + 1);
        acc += if beta == 0 { v } else { v * n.pow(beta) };
        while next < grid.len() && grid[next] == i as u64 + 1 {
            out.push(acc.clone());
            next += 1;
        }
    }
    Ok(out)
}

/// `Σ_{n≤x} J_e(n) n^β`, i.e. the θ-sum with exponent `β + w`.
pub fn summatory_jordan(e: &ExponentVector, beta: f64, grid: &[u64]) -> Result<Vec<f64>> {
    summatory(&theta_from_exponents(e), beta + e.weight() as f64, grid)
}

pub fn summatory_jordan_exact(e: &ExponentVector, beta: i32, grid: &[u64]) -> Result<Vec<Rational>> {
    let shift = i32::try_from(e.weight()).map_err(|_| Error::Domain("weight out of range".into()))?;
    summatory_exact(&theta_from_exponents(e), beta + shift, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[i32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn summatory_examples() {
        assert_eq!(summatory_jordan_exact(&ev(&[-2, 1]), 0, &[10]).unwrap(), vec![Rational::from((82, 3))]);
        // J_2 is e = (0,1): 1 + 3 + 8 + 12; e = (2) is φ²: 1 + 1 + 4 + 4
        assert_eq!(summatory_jordan_exact(&ev(&[0, 1]), 0, &[4]).unwrap(), vec![Rational::from(24)]);
        assert_eq!(summatory_jordan_exact(&ev(&[2]), 0, &[4]).unwrap(), vec![Rational::from(10)]);
        assert_eq!(summatory_jordan_exact(&ev(&[]), 0, &[100]).unwrap(), vec![Rational::from(100)]);
        let f = summatory_jordan(&ev(&[-2, 1]), 0.0, &[10]).unwrap();
        assert!((f[0] - 82.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn main_term_examples() {
        assert_eq!(MainTerm::new(0.0).eval(7.0), 7.0);
        assert!((MainTerm::new(-1.0).eval(std::f64::consts::E) - 1.0).abs() < 1e-15);
        assert_eq!(MainTerm::new(1.0).eval(10.0), 50.0);
        assert_eq!(MainTerm::new(-1.0).eval(1.0), 0.0);
        assert_eq!(MainTerm::new(2.0).eval(1.0), 1.0 / 3.0);
        assert_eq!(MainTerm::new(-1.0).kind(), MainTermKind::Log);
    }

    #[test]
    fn grid_shape() {
        let g = geometric_grid(1000, 1_000_000, 20).unwrap();
        assert_eq!(g[0], 1000);
        assert_eq!(*g.last().unwrap(), 1_000_000);
        assert_eq!(g.len(), 61);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(summatory(&ThetaSpec::zero(), 0.0, &[5, 3]), Err(Error::Domain(_))));
    }

    #[test]
    fn neumaier_recovers_small_terms() {
        let mut s = NeumaierSum::default();
        s.add(1.0);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        assert_eq!(s.value(), 2.0);
    }
}
