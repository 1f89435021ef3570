use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::{ExponentVector, FactoredInteger};

/// Möbius function.
pub fn mobius(n: &FactoredInteger) -> i32 {
    if n.is_squarefree() {
        if n.omega() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// Euler's totient `φ(n) = J_1(n)`.
pub fn euler_phi(n: &FactoredInteger) -> u64 {
    n.factors().iter().map(|&(p, e)| p.pow(e - 1) * (p - 1)).product()
}

/// Dedekind's `Ψ(n) = n Π_{p|n}(1 + 1/p) = J_2(n)/J_1(n)`.
pub fn dedekind_psi(n: &FactoredInteger) -> u64 {
    n.factors().iter().map(|&(p, e)| p.pow(e - 1) * (p + 1)).product()
}

/// Jordan totient `J_k(n) = n^k Π_{p|n}(1 - p^{-k})`, exactly.
///
/// # Panics
///
/// Panics if `k == 0`.
pub fn jordan_totient(k: u32, n: &FactoredInteger) -> Integer {
    assert!(k >= 1, "Jordan totient order must be positive");
    let mut acc = Integer::from(1);
    for &(p, e) in n.factors() {
        let pk = Integer::from(p).pow(k);
        acc *= Integer::from(&pk - 1u32);
        if e > 1 {
            acc *= pk.pow(e - 1);
        }
    }
    acc
}

/// `J_k(n) = Σ_{d|n} μ(d)(n/d)^k`, the Möbius-inversion form.
pub fn jordan_totient_by_mobius(k: u32, n: &FactoredInteger) -> Integer {
    let mut acc = Integer::new();
    for d in divisors(n) {
        let mu = mobius(&FactoredInteger::new(d));
        if mu != 0 {
            let term = Integer::from(n.value() / d).pow(k);
            if mu > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    acc
}

/// All divisors of `n` in increasing order.
pub fn divisors(n: &FactoredInteger) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in n.factors() {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Jordan totient quotient `J_e(n) = Π_i J_i(n)^{e_i}` as an exact rational.
pub fn jordan_quotient(e: &ExponentVector, n: &FactoredInteger) -> Rational {
    let mut numer = Integer::from(1);
    let mut denom = Integer::from(1);
    for (i, ei) in e.iter() {
        let j = jordan_totient(i, n);
        if ei > 0 {
            numer *= j.pow(ei as u32);
        } else {
            denom *= j.pow((-ei) as u32);
        }
    }
    Rational::from((numer, denom))
}
