//! Lehmer's formulas for `Φ_n^{(k)}(1)/Φ_n(1)` in terms of Jordan totients.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::combinatorics::{bernoulli_numbers, stirling_first_signed, weighted_partitions};
use crate::multiplicative::{euler_phi, jordan_totient};
use crate::{Error, FactoredInteger, Result};

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn require_n_above_one(n: &FactoredInteger) -> Result<()> {
    if n.value() < 2 {
        return Err(Error::Domain(format!("Lehmer formulas need n > 1, got {}", n.value())));
    }
    Ok(())
}

/// Coefficient of `J_h(n)` in `s_i(n)`:
/// `-(1/(i-1)!) (-1)^h (B_h/h) c(i,h)`.
fn power_sum_coefficients(i: u32) -> Vec<Rational> {
    let b = bernoulli_numbers(i as usize);
    let c = stirling_first_signed(i);
    let inv_fact = Rational::from((1, factorial(i - 1)));
    (1..=i)
        .map(|h| {
            let sign = if h % 2 == 0 { -1 } else { 1 };
            let term = Rational::from(&b[h as usize] * &c[h as usize]) / h;
            term * &inv_fact * sign
        })
        .collect()
}

/// Lehmer's power sum `s_i(n)`, a linear combination of `J_1(n), …, J_i(n)`.
pub fn lehmer_power_sum(i: u32, n: &FactoredInteger) -> Result<Rational> {
    require_n_above_one(n)?;
    if i == 0 {
        return Err(Error::Domain("power sum index must be positive".into()));
    }
    let mut acc = Rational::new();
    for (h, coeff) in (1..=i).zip(power_sum_coefficients(i)) {
        if coeff != 0 {
            acc += coeff * jordan_totient(h, n);
        }
    }
    Ok(acc)
}

/// The same power sum written with only even-index Bernoulli numbers:
/// `s_i = (-1)^i φ(n)/2 - (1/(i-1)!) Σ_{h≤i/2} (B_{2h}/2h) c(i,2h) J_{2h}(n)`.
pub fn lehmer_power_sum_even_form(i: u32, n: &FactoredInteger) -> Result<Rational> {
    require_n_above_one(n)?;
    if i == 0 {
        return Err(Error::Domain("power sum index must be positive".into()));
    }
    let b = bernoulli_numbers(i as usize);
    let c = stirling_first_signed(i);
    let mut acc = Rational::from((euler_phi(n), 2));
    if i % 2 == 1 {
        acc = -acc;
    }
    let mut even = Rational::new();
    for h in 1..=i / 2 {
        let idx = (2 * h) as usize;
        even += Rational::from(&b[idx] * &c[idx]) / (2 * h) * jordan_totient(2 * h, n);
    }
    Ok(acc - even / factorial(i - 1))
}

/// `Φ_n^{(k)}(1)/Φ_n(1) = k! Σ_λ Π_i (-s_i(n))^{λ_i} / (λ_i! i^{λ_i})`.
pub fn lehmer_ratio(n: &FactoredInteger, k: u32) -> Result<Rational> {
    require_n_above_one(n)?;
    if k == 0 {
        return Ok(Rational::from(1));
    }
    let neg_s: Vec<Rational> =
        (1..=k).map(|i| lehmer_power_sum(i, n).map(|s| -s)).collect::<Result<_>>()?;
    let mut total = Rational::new();
    for part in weighted_partitions(k as usize) {
        let mut term = Rational::from(1);
        for (i, &l) in part.lambda().iter().enumerate() {
            if l == 0 {
                continue;
            }
            let i = i as u32 + 1;
            let denom = factorial(l) * Integer::from(i).pow(l);
            term *= Rational::from((&neg_s[i as usize - 1]).pow(l)) / denom;
        }
        total += term;
    }
    Ok(total * factorial(k))
}

/// Leading part of `Φ_n^{(k)}(1) / (φ(n)^k Φ_n(1))`:
/// `k! Σ_λ Π_i ((-1)^{iλ_i}/λ_i!) (B_i/(i!·i))^{λ_i} J_i(n)^{λ_i} / φ(n)^k`.
///
/// The difference to the exact ratio is `O(n^{k-1}/φ(n)^k)`.
pub fn lehmer_leading_term(n: &FactoredInteger, k: u32) -> Result<Rational> {
    require_n_above_one(n)?;
    let b = bernoulli_numbers(k as usize);
    let jordan: Vec<Integer> = (1..=k).map(|i| jordan_totient(i, n)).collect();
    let mut total = Rational::new();
    for part in weighted_partitions(k as usize) {
        let mut term = Rational::from(1);
        for (idx, &l) in part.lambda().iter().enumerate() {
            if l == 0 {
                continue;
            }
            let i = idx as u32 + 1;
            let base = Rational::from(&b[idx + 1] * &jordan[idx]) / (factorial(i) * i);
            term *= base.pow(l) / factorial(l);
            if (i * l) % 2 == 1 {
                term = -term;
            }
        }
        total += term;
    }
    let phi_k = Integer::from(euler_phi(n)).pow(k);
    Ok(total * factorial(k) / phi_k)
}

/// A monomial `Π_h J_h^{m_h}` with exponents `m_1..m_k`.
type Monomial = Vec<u32>;

/// Lehmer's ratio for a fixed `k`, expanded once into a polynomial in
/// `J_1(n), …, J_k(n)` with exact rational coefficients.
///
/// Bulk sweeps evaluate the expansion in floating point from the kernel
/// ratios `J_h(n)/n^h`, avoiding per-`n` rational arithmetic.
#[derive(Debug, Clone)]
pub struct LehmerExpansion {
    order: u32,
    terms: Vec<(Rational, Monomial)>,
    float_terms: Vec<FloatTerm>,
}

#[derive(Debug, Clone)]
struct FloatTerm {
    coeff: f64,
    exponents: Vec<u32>,
    /// `k - Σ h·m_h ≥ 0`: the power of `1/n` left after normalising by `φ^k`.
    deficit: i32,
}

fn poly_mul(a: &BTreeMap<Monomial, Rational>, b: &BTreeMap<Monomial, Rational>) -> BTreeMap<Monomial, Rational> {
    let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_default() += Rational::from(ca * cb);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

impl LehmerExpansion {
    pub fn new(k: u32) -> Self {
        assert!(k >= 1, "derivative order must be positive");
        let kk = k as usize;
        let unit = {
            let mut m = BTreeMap::new();
            m.insert(vec![0u32; kk], Rational::from(1));
            m
        };
        // -s_i as a linear form
        let neg_s: Vec<BTreeMap<Monomial, Rational>> = (1..=k)
            .map(|i| {
                let mut form = BTreeMap::new();
                for (h, c) in (1..=i).zip(power_sum_coefficients(i)) {
                    if c != 0 {
                        let mut m = vec![0u32; kk];
                        m[h as usize - 1] = 1;
                        form.insert(m, -c);
                    }
                }
                form
            })
            .collect();
        let mut total: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for part in weighted_partitions(kk) {
            let mut term = unit.clone();
            let mut scale = Rational::from(1);
            for (idx, &l) in part.lambda().iter().enumerate() {
                let i = idx as u32 + 1;
                for _ in 0..l {
                    term = poly_mul(&term, &neg_s[idx]);
                }
                if l > 0 {
                    scale /= factorial(l) * Integer::from(i).pow(l);
                }
            }
            for (m, c) in term {
                *total.entry(m).or_default() += c * &scale;
            }
        }
        let k_fact = factorial(k);
        let terms: Vec<(Rational, Monomial)> = total
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (c * &k_fact, m))
            .collect();
        let float_terms = terms
            .iter()
            .map(|(c, m)| {
                let degree: u32 = m.iter().enumerate().map(|(h, &e)| (h as u32 + 1) * e).sum();
                FloatTerm { coeff: c.to_f64(), exponents: m.clone(), deficit: k as i32 - degree as i32 }
            })
            .collect();
        LehmerExpansion { order: k, terms, float_terms }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `(coefficient, exponents of J_1..J_k)` pairs.
    pub fn terms(&self) -> &[(Rational, Vec<u32>)] {
        &self.terms
    }

    /// Exact `Φ_n^{(k)}(1)/Φ_n(1)`.
    pub fn eval_exact(&self, n: &FactoredInteger) -> Result<Rational> {
        require_n_above_one(n)?;
        let jordan: Vec<Integer> = (1..=self.order).map(|h| jordan_totient(h, n)).collect();
        let mut total = Rational::new();
        for (c, m) in &self.terms {
            let mut mono = Integer::from(1);
            for (j, &e) in jordan.iter().zip(m) {
                if e > 0 {
                    mono *= Integer::from(j.pow(e));
                }
            }
            total += Rational::from(c * mono);
        }
        Ok(total)
    }

    /// Floating-point `Φ_n^{(k)}(1)/(φ(n)^k Φ_n(1))` from the kernel ratios
    /// `ratios[h-1] = J_h(n)/n^h`.
    pub fn eval_normalized_f64(&self, n: u64, ratios: &[f64]) -> f64 {
        let inv_n = 1.0 / n as f64;
        let phi_ratio_k = ratios[0].powi(self.order as i32);
        let mut total = 0.0;
        for t in &self.float_terms {
            let mut v = t.coeff * inv_n.powi(t.deficit);
            for (r, &e) in ratios.iter().zip(&t.exponents) {
                if e > 0 {
                    v *= r.powi(e as i32);
                }
            }
            total += v;
        }
        total / phi_ratio_k
    }
}
