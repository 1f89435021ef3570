//! Bernoulli numbers, signed Stirling numbers of the first kind and the
//! weighted partitions `λ_1 + 2λ_2 + … + kλ_k = k` that index Lehmer's
//! Newton-type formula.

use std::sync::Mutex;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// `B_0..=B_n` with the convention `B_1 = -1/2`, from
/// `B_m = -Σ_{j<m} C(m, j) B_j / (m - j + 1)`.
///
/// Values are memoised for the lifetime of the process.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut memo = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if memo.is_empty() {
        memo.push(Rational::from(1));
    }
    while memo.len() <= n {
        let m = memo.len();
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in memo.iter().enumerate() {
            if *b != 0 {
                acc += Rational::from(b * &binom) / Integer::from(m - j + 1);
            }
            binom *= (m - j) as u64;
            binom /= j as u64 + 1;
        }
        memo.push(-acc);
    }
    memo[..=n].to_vec()
}

/// Single Bernoulli number `B_n`.
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

/// Coefficients `c(k, 0..=k)` of the falling factorial `X(X-1)⋯(X-k+1)`.
pub fn stirling_first_signed(k: u32) -> Vec<Integer> {
    let mut row = vec![Integer::from(1)];
    for m in 0..k {
        // multiply by (X - m)
        let mut next = vec![Integer::new(); row.len() + 1];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= Integer::from(c * m);
        }
        row = next;
    }
    row
}

/// Non-negative `(λ_1, …, λ_k)` with `Σ i·λ_i = k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedPartition {
    lambda: Vec<u32>,
}

impl WeightedPartition {
    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    /// `λ_i` for 1-based `i`.
    pub fn part(&self, i: usize) -> u32 {
        self.lambda[i - 1]
    }

    pub fn order(&self) -> usize {
        self.lambda.len()
    }

    /// `Σ i·λ_i`; equals [`order`](Self::order) by construction.
    pub fn weight(&self) -> usize {
        self.lambda.iter().enumerate().map(|(i, &l)| (i + 1) * l as usize).sum()
    }
}

/// All weighted partitions of `k`, in decreasing lexicographic order of
/// `(λ_1, …, λ_k)`. For `k = 3`: `(3,0,0), (1,1,0), (0,0,1)`.
pub fn weighted_partitions(k: usize) -> Vec<WeightedPartition> {
    fn fill(i: usize, remaining: usize, current: &mut Vec<u32>, out: &mut Vec<WeightedPartition>) {
        let k = current.len();
        if i == k {
            if remaining == 0 {
                out.push(WeightedPartition { lambda: current.clone() });
            }
            return;
        }
        let size = i + 1;
        for count in (0..=remaining / size).rev() {
            current[i] = count as u32;
            fill(i + 1, remaining - count * size, current, out);
        }
        current[i] = 0;
    }
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut current = vec![0u32; k];
    fill(0, k, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_examples() {
        let b = bernoulli_numbers(4);
        assert_eq!(b[0], 1);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[3], 0);
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn bernoulli_odd_vanish_and_recursion_closes() {
        let b = bernoulli_numbers(40);
        for (n, bn) in b.iter().enumerate().skip(3).step_by(2) {
            assert_eq!(*bn, 0, "B_{n}");
        }
        for m in 1..=40usize {
            let mut acc = Rational::new();
            for j in 0..m {
                let binom = Integer::from(Integer::binomial_u(m as u32, j as u32));
                acc += Rational::from(&b[j] * binom) / Integer::from(m - j + 1);
            }
            assert_eq!(b[m], -acc);
        }
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling_first_signed(1), vec![0, 1]);
        assert_eq!(stirling_first_signed(2), vec![0, -1, 1]);
        assert_eq!(stirling_first_signed(3), vec![0, 2, -3, 1]);
        for k in 2..15 {
            let row = stirling_first_signed(k);
            let total: Integer = row.iter().sum();
            assert_eq!(total, 0);
            assert_eq!(row[k as usize], 1);
            assert_eq!(row[0], 0);
        }
    }

    #[test]
    fn partition_examples() {
        let l = |k| weighted_partitions(k).into_iter().map(|p| p.lambda).collect::<Vec<_>>();
        assert_eq!(l(1), vec![vec![1]]);
        assert_eq!(l(2), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(l(3), vec![vec![3, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert!(weighted_partitions(0).is_empty());
    }

    fn partition_count(k: usize) -> usize {
        // p(k) by the largest-part recurrence
        let mut table = vec![vec![0usize; k + 1]; k + 1];
        for m in 0..=k {
            table[0][m] = 1;
        }
        for n in 1..=k {
            for m in 1..=k {
                table[n][m] = table[n][m - 1] + if m <= n { table[n - m][m] } else { 0 };
            }
        }
        table[k][k]
    }

    #[test]
    fn partition_counts_and_order() {
        for k in 1..=20 {
            let parts = weighted_partitions(k);
            assert_eq!(parts.len(), partition_count(k), "k = {k}");
            assert!(parts.iter().all(|p| p.weight() == k));
            assert!(parts.windows(2).all(|w| w[0].lambda > w[1].lambda));
        }
        assert_eq!(partition_count(20), 627);
    }
}
