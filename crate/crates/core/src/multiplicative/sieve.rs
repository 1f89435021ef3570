use crate::{Error, FactoredInteger, Result};

/// Largest sieve limit accepted by [`sieve_spf`]; `u32` entries make this
/// roughly 1.6 GB.
pub const DEFAULT_SIEVE_CEILING: u64 = 400_000_000;

/// Smallest-prime-factor table for `2..=limit`, together with the primes it
/// found.
#[derive(Debug, Clone)]
pub struct SpfTable {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

/// Builds the smallest-prime-factor table with the default memory ceiling.
pub fn sieve_spf(limit: u64) -> Result<SpfTable> {
    sieve_spf_with_ceiling(limit, DEFAULT_SIEVE_CEILING)
}

/// Linear sieve: every composite is struck exactly once, by its least prime.
pub fn sieve_spf_with_ceiling(limit: u64, ceiling: u64) -> Result<SpfTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("sieve limit must be at least 2, got {limit}")));
    }
    let ceiling = ceiling.min(u64::from(u32::MAX) - 1);
    if limit > ceiling {
        return Err(Error::Capacity { requested: limit, ceiling });
    }
    let n_max = limit as usize;
    let mut spf = vec![0u32; n_max + 1];
    let mut primes = Vec::with_capacity(prime_count_estimate(limit));
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let least = spf[i];
        for &p in &primes {
            if p > least {
                break;
            }
            let composite = i * p as usize;
            if composite > n_max {
                break;
            }
            spf[composite] = p;
        }
    }
    Ok(SpfTable { spf, primes })
}

fn prime_count_estimate(limit: u64) -> usize {
    let x = limit as f64;
    (1.26 * x / x.ln().max(1.0)) as usize + 16
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Least prime dividing `n`.
    ///
    /// # Panics
    ///
    /// Panics unless `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> u64 {
        assert!(n >= 2 && n <= self.limit(), "spf lookup {n} outside 2..={}", self.limit());
        u64::from(self.spf[n as usize])
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit() && self.spf[n as usize] as u64 == n
    }

    /// Factorization by repeated spf lookups; falls back to trial division
    /// above the table limit.
    pub fn factorize(&self, n: u64) -> FactoredInteger {
        if n > self.limit() {
            return FactoredInteger::new(n);
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        FactoredInteger::from_sorted_unchecked(n, factors)
    }

    /// Distinct primes of `n` without allocation, smallest first.
    pub fn for_each_prime_factor(&self, n: u64, mut f: impl FnMut(u64)) {
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            while m % p == 0 {
                m /= p;
            }
            f(p as u64);
        }
    }

    /// True when `n/spf(n)` is still divisible by `spf(n)`.
    pub(crate) fn repeats_least_prime(&self, n: usize) -> bool {
        let p = self.spf[n] as usize;
        let m = n / p;
        m > 1 && self.spf[m] as usize == p
    }

    pub(crate) fn raw_spf(&self, n: usize) -> usize {
        self.spf[n] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_spf(n: u64) -> u64 {
        (2..=n).find(|d| n % d == 0).unwrap()
    }

    #[test]
    fn small_tables() {
        let t = sieve_spf(10).unwrap();
        assert_eq!(t.spf(9), 3);
        assert_eq!(t.spf(10), 2);
        assert_eq!(t.spf(7), 7);
        assert_eq!(sieve_spf(2).unwrap().spf(2), 2);
    }

    #[test]
    fn matches_trial_division() {
        let t = sieve_spf(30).unwrap();
        assert_eq!(t.spf(30), 2);
        assert_eq!(t.spf(25), 5);
        let t = sieve_spf(5000).unwrap();
        for n in 2..=5000 {
            assert_eq!(t.spf(n), trial_spf(n), "n = {n}");
        }
        assert_eq!(t.primes().len(), 669);
    }

    #[test]
    fn limits_are_enforced() {
        assert!(matches!(sieve_spf(1), Err(Error::Domain(_))));
        assert_eq!(
            sieve_spf_with_ceiling(1_000, 100).unwrap_err(),
            Error::Capacity { requested: 1_000, ceiling: 100 }
        );
    }

    #[test]
    fn factorize_above_limit_falls_back() {
        let t = sieve_spf(100).unwrap();
        assert_eq!(t.factorize(1001).factors(), &[(7, 1), (11, 1), (13, 1)]);
        assert_eq!(t.factorize(96).factors(), &[(2, 5), (3, 1)]);
    }
}
