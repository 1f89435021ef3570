use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Exponent vector `e = (e_1, …, e_r)` of a Jordan totient quotient
/// `J_e = Π J_i^{e_i}`.
///
/// Trailing zeros are dropped on construction, so `(0)` and `()` are the
/// same vector. The weight is always recomputed from the entries.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<i32>", into = "Vec<i32>")]
pub struct ExponentVector {
    entries: Vec<i32>,
}

impl ExponentVector {
    pub fn new(mut entries: Vec<i32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        ExponentVector { entries }
    }

    pub fn zero() -> Self {
        ExponentVector::default()
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    /// `e_i` for a 1-based index; zero past the end.
    pub fn entry(&self, i: usize) -> i32 {
        assert!(i >= 1, "exponent indices start at 1");
        self.entries.get(i - 1).copied().unwrap_or(0)
    }

    /// `e_1`, which governs the log-power secondary terms.
    pub fn first(&self) -> i32 {
        self.entry(1)
    }

    /// Largest index with a non-zero exponent (`0` for the zero vector).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `w = Σ i·e_i`.
    pub fn weight(&self) -> i64 {
        self.iter().map(|(i, e)| i as i64 * i64::from(e)).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.weight() == 0
    }

    /// `(i, e_i)` pairs with `e_i ≠ 0`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i as u32 + 1, e))
    }
}

impl From<Vec<i32>> for ExponentVector {
    fn from(entries: Vec<i32>) -> Self {
        ExponentVector::new(entries)
    }
}

impl From<ExponentVector> for Vec<i32> {
    fn from(e: ExponentVector) -> Self {
        e.entries
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    /// Comma-separated integers, `e_1` first, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if body.is_empty() {
            return Err(Error::Parse("empty exponent vector".into()));
        }
        body.split(',')
            .map(|part| {
                part.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad exponent {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector::new)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_and_balance() {
        let e: ExponentVector = "-2,1".parse().unwrap();
        assert_eq!(e.weight(), 0);
        assert!(e.is_balanced());
        assert_eq!(e.first(), -2);
        let psi = ExponentVector::new(vec![-1, 1]);
        assert_eq!(psi.weight(), 1);
        assert!(!psi.is_balanced());
    }

    #[test]
    fn trailing_zeros_normalised() {
        let e: ExponentVector = "(-4,2,0,0)".parse().unwrap();
        assert_eq!(e.entries(), &[-4, 2]);
        assert_eq!(e.to_string(), "(-4,2)");
        let z: ExponentVector = "0".parse().unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "(0)");
        assert_eq!(z, ExponentVector::zero());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("".parse::<ExponentVector>(), Err(Error::Parse(_))));
        assert!(matches!("1,x".parse::<ExponentVector>(), Err(Error::Parse(_))));
    }
}
