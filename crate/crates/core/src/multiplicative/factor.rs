use std::fmt;

use crate::{Error, Result, SpfTable};

/// A positive integer together with its prime factorization.
///
/// Factors are sorted by prime, primes are distinct and every exponent is at
/// least one. `1` has the empty factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

/// Factors `n`, using `spf` when it covers `n` and trial division otherwise.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn factorize(n: u64, spf: Option<&SpfTable>) -> FactoredInteger {
    match spf {
        Some(table) => table.factorize(n),
        None => FactoredInteger::new(n),
    }
}

impl FactoredInteger {
    /// Trial division up to `√n`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "cannot factor 0");
        let mut factors = Vec::new();
        let mut m = n;
        let mut push = |p: u64, m: &mut u64| {
            let mut e = 0;
            while *m % p == 0 {
                *m /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        };
        push(2, &mut m);
        push(3, &mut m);
        let mut d = 5u64;
        while d.saturating_mul(d) <= m {
            push(d, &mut m);
            push(d + 2, &mut m);
            d += 6;
        }
        if m > 1 {
            factors.push((m, 1));
        }
        FactoredInteger { value: n, factors }
    }

    /// Builds from explicit `(prime, exponent)` pairs, checking every invariant.
    pub fn from_factors(mut factors: Vec<(u64, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut value: u64 = 1;
        for (i, &(p, e)) in factors.iter().enumerate() {
            if e == 0 {
                return Err(Error::Domain(format!("exponent of {p} is zero")));
            }
            if i > 0 && factors[i - 1].0 == p {
                return Err(Error::Domain(format!("prime {p} listed twice")));
            }
            if FactoredInteger::new(p).factors != [(p, 1)] {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            let pe = p
                .checked_pow(e)
                .and_then(|pe| value.checked_mul(pe))
                .ok_or_else(|| Error::Domain("factored value overflows u64".into()))?;
            value = pe;
        }
        Ok(FactoredInteger { value, factors })
    }

    pub(crate) fn from_sorted_unchecked(value: u64, factors: Vec<(u64, u32)>) -> Self {
        FactoredInteger { value, factors }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Distinct primes dividing the value, in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// The squarefree kernel: product of the distinct primes.
    pub fn radical(&self) -> FactoredInteger {
        let factors: Vec<_> = self.factors.iter().map(|&(p, _)| (p, 1)).collect();
        let value = factors.iter().map(|&(p, _)| p).product();
        FactoredInteger { value, factors }
    }

    pub fn is_even(&self) -> bool {
        self.value % 2 == 0
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(FactoredInteger::new(1).factors().is_empty());
        assert_eq!(FactoredInteger::new(12).factors(), &[(2, 2), (3, 1)]);
        assert_eq!(FactoredInteger::new(97).factors(), &[(97, 1)]);
        assert_eq!(FactoredInteger::new(600_851_475_143).factors().len(), 4);
    }

    #[test]
    fn product_reconstructs_value() {
        for n in 1..3000u64 {
            let f = FactoredInteger::new(n);
            let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn from_factors_validates() {
        assert_eq!(FactoredInteger::from_factors(vec![(3, 1), (2, 2)]).unwrap().value(), 12);
        assert!(FactoredInteger::from_factors(vec![(4, 1)]).is_err());
        assert!(FactoredInteger::from_factors(vec![(2, 1), (2, 1)]).is_err());
        assert!(FactoredInteger::from_factors(vec![(2, 0)]).is_err());
        assert_eq!(FactoredInteger::from_factors(vec![]).unwrap().value(), 1);
    }

    #[test]
    fn radical_and_display() {
        let f = FactoredInteger::new(360);
        assert_eq!(f.radical().value(), 30);
        assert_eq!(f.to_string(), "2^3·3^2·5");
        assert!(!f.is_squarefree());
        assert!(f.radical().is_squarefree());
    }
}
