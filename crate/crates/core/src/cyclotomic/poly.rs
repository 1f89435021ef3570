use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::multiplicative::{divisors, mobius};
use crate::{Error, FactoredInteger, Result};

/// Default cap on derivative orders requested through the lab and CLI.
pub const DEFAULT_MAX_DERIVATIVE_ORDER: u32 = 10;

/// `Φ_n` with exact coefficients `a_n(0..=φ(n))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPoly {
    index: u64,
    coeffs: Vec<Integer>,
}

impl CyclotomicPoly {
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Equals `φ(n)`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: i64) -> Integer {
        poly_derivative_at(&self.coeffs, 0, z)
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }
}

trait Coeff: Clone {
    fn zero() -> Self;
    fn from_i32(v: i32) -> Self;
    fn is_zero(&self) -> bool;
    /// `self += rhs`; `None` on overflow.
    fn add(&mut self, rhs: &Self) -> Option<()>;
    fn sub(&mut self, rhs: &Self) -> Option<()>;
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn from_i32(v: i32) -> Self {
        i64::from(v)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&mut self, rhs: &Self) -> Option<()> {
        *self = self.checked_add(*rhs)?;
        Some(())
    }
    fn sub(&mut self, rhs: &Self) -> Option<()> {
        *self = self.checked_sub(*rhs)?;
        Some(())
    }
}

impl Coeff for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn from_i32(v: i32) -> Self {
        Integer::from(v)
    }
    fn is_zero(&self) -> bool {
        self.cmp0().is_eq()
    }
    fn add(&mut self, rhs: &Self) -> Option<()> {
        *self += rhs;
        Some(())
    }
    fn sub(&mut self, rhs: &Self) -> Option<()> {
        *self -= rhs;
        Some(())
    }
}

/// `p(X)·(X^d - 1)`.
fn mul_binomial<T: Coeff>(p: &[T], d: usize) -> Option<Vec<T>> {
    let mut out = vec![T::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d].add(c)?;
        out[i].sub(c)?;
    }
    Some(out)
}

enum Division<T> {
    Exact(Vec<T>),
    Remainder,
    Overflow,
}

/// `p(X) / (X^d - 1)`. Comparing coefficients of `p = q·(X^d - 1)` gives
/// `q_{i-d} = p_i + q_i` from the top down; the low `d` coefficients of `p`
/// must then equal `-q_i`.
fn div_binomial<T: Coeff>(p: &[T], d: usize) -> Division<T> {
    if p.len() <= d {
        return Division::Remainder;
    }
    let qlen = p.len() - d;
    let mut q = vec![T::zero(); qlen];
    for i in (d..p.len()).rev() {
        let mut v = p[i].clone();
        if i < qlen && v.add(&q[i]).is_none() {
            return Division::Overflow;
        }
        q[i - d] = v;
    }
    for i in 0..d {
        let mut r = p[i].clone();
        if i < qlen && r.add(&q[i]).is_none() {
            return Division::Overflow;
        }
        if !r.is_zero() {
            return Division::Remainder;
        }
    }
    Division::Exact(q)
}

enum Build<T> {
    Done(Vec<T>),
    Overflow,
}

/// `Φ_n = Π_{d|n} (X^d - 1)^{μ(n/d)}`: multiply every numerator factor,
/// then divide out every denominator factor exactly.
fn build<T: Coeff>(n: u64) -> Result<Build<T>> {
    let f = FactoredInteger::new(n);
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    for d in divisors(&f) {
        match mobius(&FactoredInteger::new(n / d)) {
            1 => numer.push(d as usize),
            -1 => denom.push(d as usize),
            _ => {}
        }
    }
    let mut p = vec![T::from_i32(1)];
    for &d in &numer {
        match mul_binomial(&p, d) {
            Some(next) => p = next,
            None => return Ok(Build::Overflow),
        }
    }
    for &d in &denom {
        match div_binomial(&p, d) {
            Division::Exact(q) => p = q,
            Division::Overflow => return Ok(Build::Overflow),
            Division::Remainder => {
                return Err(Error::Inconsistent(format!(
                    "division by X^{d} - 1 left a remainder while building Φ_{n}"
                )))
            }
        }
    }
    Ok(Build::Done(p))
}

/// The `n`-th cyclotomic polynomial.
///
/// Runs in machine integers and switches to arbitrary precision if any
/// intermediate coefficient overflows.
pub fn cyclotomic_poly(n: u64) -> Result<CyclotomicPoly> {
    if n == 0 {
        return Err(Error::Domain("cyclotomic index must be positive".into()));
    }
    let coeffs = match build::<i64>(n)? {
        Build::Done(c) => c.into_iter().map(Integer::from).collect(),
        Build::Overflow => match build::<Integer>(n)? {
            Build::Done(c) => c,
            Build::Overflow => unreachable!("arbitrary precision cannot overflow"),
        },
    };
    Ok(CyclotomicPoly { index: n, coeffs })
}

fn cache() -> &'static Mutex<HashMap<u64, Arc<CyclotomicPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Process-wide memoised [`cyclotomic_poly`].
pub fn cyclotomic_poly_cached(n: u64) -> Result<Arc<CyclotomicPoly>> {
    if let Some(p) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Ok(Arc::clone(p));
    }
    let poly = Arc::new(cyclotomic_poly(n)?);
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(guard.entry(n).or_insert(poly)))
}

/// `f^{(k)}(z) = Σ_{j≥k} a_j · j!/(j-k)! · z^{j-k}` for any integer polynomial.
pub fn poly_derivative_at(coeffs: &[Integer], k: u32, z: i64) -> Integer {
    let k = k as usize;
    let mut acc = Integer::new();
    if coeffs.len() <= k {
        return acc;
    }
    // Horner over the k-th derivative's coefficients.
    for j in (k..coeffs.len()).rev() {
        acc *= z;
        if coeffs[j].cmp0().is_ne() {
            let mut falling = Integer::from(1);
            for t in 0..k {
                falling *= (j - t) as u64;
            }
            acc += falling * &coeffs[j];
        }
    }
    acc
}

/// Exact `Φ^{(k)}(z)` for a cyclotomic polynomial.
pub fn derivative_at(f: &CyclotomicPoly, k: u32, z: i64) -> Integer {
    poly_derivative_at(&f.coeffs, k, z)
}

/// `Φ_n^{(k)}(z) / (φ(n)^k Φ_n(z))`.
pub fn normalized_derivative(n: u64, k: u32, z: i64) -> Result<Rational> {
    let f = cyclotomic_poly_cached(n)?;
    let value = f.eval(z);
    if value.cmp0().is_eq() {
        return Err(Error::ZeroDenominator(format!("Φ_{n}({z}) = 0")));
    }
    let denom = Integer::from(f.degree()).pow(k) * value;
    Ok(Rational::from((derivative_at(&f, k, z), denom)))
}

/// `f'''/f' - (3/2)(f''/f')²` at `z` from exact derivative values.
pub fn schwarzian_of(coeffs: &[Integer], z: i64) -> Result<Rational> {
    let d1 = poly_derivative_at(coeffs, 1, z);
    if d1.cmp0().is_eq() {
        return Err(Error::ZeroDenominator(format!("f'({z}) = 0")));
    }
    let d2 = poly_derivative_at(coeffs, 2, z);
    let d3 = poly_derivative_at(coeffs, 3, z);
    let r3 = Rational::from((d3, d1.clone()));
    let r2 = Rational::from((d2, d1));
    Ok(r3 - Rational::from((3, 2)) * r2.square())
}
