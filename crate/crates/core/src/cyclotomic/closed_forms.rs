//! Closed forms for `Φ_n''(-1)/Φ_n(-1)` and the Schwarzian `S(Φ_n)(1)`.

use rug::Rational;

use crate::multiplicative::{dedekind_psi, euler_phi};
use crate::{Error, FactoredInteger, Result};

/// `Φ_n''(-1)/Φ_n(-1) = (φ/4)(φ + a_n Ψ - 2)` for `n ≥ 3`, where `a_n` is
/// `1` for odd `n`, `1/9` when `2 ∥ n` and `1/3` when `4 | n`.
pub fn second_derivative_ratio_minus1(n: &FactoredInteger) -> Result<Rational> {
    if n.value() < 3 {
        return Err(Error::Domain(format!("Φ_n''(-1)/Φ_n(-1) closed form needs n ≥ 3, got {}", n.value())));
    }
    let a = match n.factors().first() {
        Some(&(2, 1)) => Rational::from((1, 9)),
        Some(&(2, _)) => Rational::from((1, 3)),
        _ => Rational::from(1),
    };
    let phi = Rational::from(euler_phi(n));
    let psi = Rational::from(dedekind_psi(n));
    Ok(Rational::from(&phi / 4u32) * (phi + a * psi - 2u32))
}

/// `S(Φ_n)(1) = -φ(n)²/8 - Ψ(n)²/24 + 1/2` for `n ≥ 2`.
pub fn schwarzian_at_1(n: &FactoredInteger) -> Result<Rational> {
    if n.value() < 2 {
        return Err(Error::Domain(format!("Schwarzian closed form needs n ≥ 2, got {}", n.value())));
    }
    let phi = Rational::from(euler_phi(n));
    let psi = Rational::from(dedekind_psi(n));
    Ok(Rational::from((1, 2)) - phi.square() / 8u32 - psi.square() / 24u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u64) -> FactoredInteger {
        FactoredInteger::new(n)
    }

    #[test]
    fn minus_one_examples() {
        assert_eq!(second_derivative_ratio_minus1(&f(3)).unwrap(), 2);
        assert_eq!(second_derivative_ratio_minus1(&f(6)).unwrap(), Rational::from((2, 3)));
        assert_eq!(second_derivative_ratio_minus1(&f(4)).unwrap(), 1);
        assert!(second_derivative_ratio_minus1(&f(2)).is_err());
    }

    #[test]
    fn schwarzian_examples() {
        assert_eq!(schwarzian_at_1(&f(5)).unwrap(), -3);
        assert_eq!(schwarzian_at_1(&f(3)).unwrap(), Rational::from((-2, 3)));
        assert_eq!(schwarzian_at_1(&f(2)).unwrap(), 0);
        assert!(schwarzian_at_1(&f(1)).is_err());
    }
}
