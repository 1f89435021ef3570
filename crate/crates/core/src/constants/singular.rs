use rug::ops::Pow;
use rug::{Float, Rational};

use super::zeta::prime_zeta_prec;
use super::{ConstantValue, Method, PrecisionContext};
use crate::combinatorics::{bernoulli_numbers, weighted_partitions};
use crate::multiplicative::{sieve_spf, theta_from_exponents, ExponentVector, FactoredInteger, ThetaSpec};
use crate::{Error, Result};

/// Truncated products up to this prime limit are also returned exactly.
pub const EXACT_PRODUCT_LIMIT: u64 = 1000;

fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    if limit < 2 {
        return Ok(Vec::new());
    }
    Ok(sieve_spf(limit)?.primes().iter().map(|&p| u64::from(p)).collect())
}

fn next_prime(n: u64) -> u64 {
    (n + 1..).find(|&m| m >= 2 && FactoredInteger::new(m).factors() == [(m, 1)]).unwrap()
}

/// `Π_{p ≤ prime_limit}(1 + θ_p/p)`.
///
/// The error bound is a heuristic: the log of the first omitted factor,
/// scaled by the prime count density `q/ln q` and a safety factor of 10.
pub fn singular_series_truncated(
    theta: &ThetaSpec,
    prime_limit: u64,
    ctx: &PrecisionContext,
) -> Result<ConstantValue> {
    ctx.validate()?;
    let prec = ctx.bits();
    let inputs = format!("{theta}; primes <= {prime_limit}");
    if theta.is_identically_zero() {
        return Ok(ConstantValue::exact(Rational::from(1), prec, Method::Truncated, inputs));
    }
    let primes = primes_up_to(prime_limit)?;
    let factor = |p: u64| Rational::from(theta.theta_p(p) / p) + 1u32;

    if let Some(&p) = primes.iter().find(|&&p| factor(p) == 0) {
        let mut v = ConstantValue::exact(Rational::new(), prec, Method::Truncated, inputs);
        v.factor_count = primes.iter().position(|&q| q == p).unwrap() + 1;
        return Ok(v);
    }

    let (value, exact) = if prime_limit <= EXACT_PRODUCT_LIMIT {
        let mut prod = Rational::from(1);
        for &p in &primes {
            prod *= factor(p);
        }
        (Float::with_val(prec, &prod), Some(prod))
    } else {
        let mut prod = Float::with_val(prec + 16, 1);
        for &p in &primes {
            prod *= Float::with_val(prec + 16, &factor(p));
        }
        (Float::with_val(prec, &prod), None)
    };

    let q = next_prime(prime_limit.max(1));
    let first_omitted = (theta.theta_p_f64(q) / q as f64).ln_1p().abs();
    let tail = 10.0 * first_omitted * q as f64 / (q as f64).ln();
    let magnitude = value.to_f64().abs();
    let error_bound = magnitude * (tail.exp_m1() + ctx.rounding_allowance());
    Ok(ConstantValue {
        value,
        error_bound,
        method: Method::Truncated,
        inputs,
        exact,
        factor_count: primes.len(),
    })
}

/// Coefficients `c_0..=c_order` of `log(1 + u·θ(u))` as a series in `u`.
fn log_expansion(theta: &ThetaSpec, order: usize) -> Result<Vec<Rational>> {
    let t = theta.rule().series(order)?;
    let mut g = vec![Rational::new(); order + 1];
    g[1..].clone_from_slice(&t[..order]);
    // (1 + g)·h' = g'  ⇒  h_m = g_m − (1/m) Σ_{j<m} j·h_j·g_{m−j}
    let mut h = vec![Rational::new(); order + 1];
    for m in 1..=order {
        let mut acc = Rational::new();
        for j in 1..m {
            if h[j] != 0 && g[m - j] != 0 {
                acc += Rational::from(&h[j] * &g[m - j]) * j as u64;
            }
        }
        h[m] = Rational::from(&g[m] - acc / m as u64);
    }
    Ok(h)
}

fn log2_abs(r: &Rational) -> f64 {
    let n = r.numer().significant_bits() as f64;
    let d = r.denom().significant_bits() as f64;
    // exact enough for guard-bit and envelope purposes
    if n < 1000.0 && d < 1000.0 {
        r.to_f64().abs().log2()
    } else {
        n - d
    }
}

/// `𝔖_θ` via the log-expansion with prime-zeta tails.
///
/// With `P0` the direct prime limit (raised to cover every override) and `M`
/// the series order,
/// `log 𝔖 = Σ_{p≤P0} log(1+θ_p/p) + Σ_{m=2}^{M} c_m (P(m) − Σ_{p≤P0} p^{−m})`.
/// The omitted `m > M` terms are bounded by a geometric envelope fitted to
/// `|c_m|^{1/m}` over `M/2 ≤ m ≤ M`.
pub fn singular_series_accelerated(theta: &ThetaSpec, ctx: &PrecisionContext) -> Result<ConstantValue> {
    ctx.validate()?;
    let prec = ctx.bits();
    let p0 = ctx.direct_prime_limit.max(theta.max_override_prime().unwrap_or(0));
    let order = ctx.tail_series_order as usize;
    let inputs = format!("{theta}; P0={p0}, M={order}");
    if theta.is_identically_zero() {
        return Ok(ConstantValue::exact(Rational::from(1), prec, Method::Accelerated, inputs));
    }

    let primes = primes_up_to(p0)?;
    let factor = |p: u64| Rational::from(theta.theta_p(p) / p) + 1u32;
    if let Some(pos) = primes.iter().position(|&p| factor(p) == 0) {
        let mut v = ConstantValue::exact(Rational::new(), prec, Method::Accelerated, inputs);
        v.factor_count = pos + 1;
        return Ok(v);
    }

    let c = log_expansion(theta, order)?;
    if c[1] != 0 {
        return Err(Error::ExpansionInvalid(format!(
            "theta_p tends to {} rather than 0; the product diverges",
            c[1]
        )));
    }
    let q_next = next_prime(p0);
    let ratio = theta.rule().eval(q_next) / q_next;
    if Rational::from(ratio.abs_ref()) >= 1 {
        return Err(Error::ExpansionInvalid(format!("|theta_p/p| >= 1 at p={q_next} beyond P0")));
    }

    let nonzero = c[2..].iter().filter(|x| **x != 0).map(log2_abs);
    let max_log2 = nonzero.fold(0.0f64, f64::max);
    let guard = max_log2.ceil().max(0.0) as u32 + 16;
    let work = prec + guard;

    let rho = (order.div_ceil(2).max(2)..=order)
        .filter(|&m| c[m] != 0)
        .map(|m| (log2_abs(&c[m]) / m as f64).exp2())
        .fold(0.0f64, f64::max);
    let q = rho / (p0 + 1) as f64;
    if q >= 0.5 {
        return Err(Error::ExpansionInvalid(format!(
            "series growth {rho:.3} too large for P0={p0}; raise the direct prime limit"
        )));
    }
    let tail = 10.0 * q.powi(order as i32 + 1) / (1.0 - q) * (1.0 + (p0 + 1) as f64 / order as f64);

    let mut sign_negative = false;
    let mut log_sum = Float::with_val(work, 0);
    for &p in &primes {
        let f = Float::with_val(work, &factor(p));
        if f.is_sign_negative() {
            sign_negative = !sign_negative;
        }
        log_sum += f.abs().ln();
    }
    let mut terms = 0usize;
    for m in 2..=order {
        if c[m] == 0 {
            continue;
        }
        let mut rest = prime_zeta_prec(m as f64, work)?;
        for &p in &primes {
            rest -= Float::with_val(work, p).pow(-(m as i32));
        }
        log_sum += Float::with_val(work, &c[m]) * rest;
        terms += 1;
    }

    let mut value = Float::with_val(prec, log_sum.exp());
    if sign_negative {
        value = -value;
    }
    let log_error = tail + ctx.rounding_allowance();
    let error_bound = value.to_f64().abs() * log_error.exp_m1();
    Ok(ConstantValue {
        value,
        error_bound,
        method: Method::Accelerated,
        inputs,
        exact: None,
        factor_count: primes.len() + terms,
    })
}

/// The linear combination `𝔖_k(Φ) = Σ coeff · 𝔖_{e(λ)}` over weighted
/// partitions `λ` of `k`, with `e_1 = λ_1 − k` and `e_i = λ_i` otherwise.
///
/// Coefficients are `(−1)^k k! Π_i (1/λ_i!)(B_i/(i!·i))^{λ_i}`; partitions
/// giving the same `e` are merged and zero coefficients dropped.
pub fn sigma_k_phi_terms(k: usize) -> Result<Vec<(Rational, ExponentVector)>> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let bern = bernoulli_numbers(k);
    let fact = |n: usize| (1..=n as u64).fold(Rational::from(1), |acc, j| acc * j);
    let mut out: Vec<(Rational, ExponentVector)> = Vec::new();
    for part in weighted_partitions(k) {
        let mut coeff = fact(k);
        if k % 2 == 1 {
            coeff = -coeff;
        }
        for i in 1..=k {
            let l = part.part(i);
            if l == 0 {
                continue;
            }
            let base = Rational::from(&bern[i] / fact(i)) / i as u64;
            for _ in 0..l {
                coeff *= &base;
            }
            coeff /= fact(l as usize);
        }
        if coeff == 0 {
            continue;
        }
        let mut entries: Vec<i32> = (1..=k).map(|i| part.part(i) as i32).collect();
        entries[0] -= k as i32;
        let e = ExponentVector::new(entries);
        if !e.is_balanced() {
            return Err(Error::Inconsistent(format!("index vector {e} has weight {}", e.weight())));
        }
        match out.iter_mut().find(|(_, f)| *f == e) {
            Some((c, _)) => *c += coeff,
            None => out.push((coeff, e)),
        }
    }
    out.retain(|(c, _)| *c != 0);
    Ok(out)
}

/// `𝔖_k(Φ)`, assembled from accelerated evaluations of each `𝔖_{e(λ)}`.
pub fn sigma_k_phi(k: usize, ctx: &PrecisionContext) -> Result<ConstantValue> {
    ctx.validate()?;
    let terms = sigma_k_phi_terms(k)?;
    let values = terms
        .iter()
        .map(|(_, e)| singular_series_accelerated(&theta_from_exponents(e), ctx))
        .collect::<Result<Vec<_>>>()?;
    let parts: Vec<(Rational, &ConstantValue)> = terms.iter().map(|(c, _)| c.clone()).zip(&values).collect();
    let inputs = format!("S_{k}(Phi) over {} index vectors", terms.len());
    Ok(combine(&parts, Rational::new(), ctx.bits(), inputs))
}

fn combine(parts: &[(Rational, &ConstantValue)], offset: Rational, prec: u32, inputs: String) -> ConstantValue {
    let mut value = Float::with_val(prec + 16, &offset);
    let mut error_bound = 0.0;
    let mut exact = Some(offset);
    let mut factor_count = 0;
    for (coeff, part) in parts {
        value += Float::with_val(prec + 16, coeff) * &part.value;
        error_bound += coeff.to_f64().abs() * part.error_bound;
        factor_count += part.factor_count;
        exact = match (exact, &part.exact) {
            (Some(acc), Some(x)) => Some(acc + Rational::from(coeff * x)),
            _ => None,
        };
    }
    ConstantValue {
        value: Float::with_val(prec, &value),
        error_bound: if exact.is_some() { 0.0 } else { error_bound },
        method: Method::Accelerated,
        inputs,
        exact,
        factor_count,
    }
}

/// Mean of `Φ_n''(-1)/(φ(n)²Φ_n(-1))`: `(5𝔖_{(-2,1)} + 12)/48`.
pub fn phi_minus1_main_coefficient(ctx: &PrecisionContext) -> Result<ConstantValue> {
    let s = singular_series_accelerated(&theta_from_exponents(&ExponentVector::new(vec![-2, 1])), ctx)?;
    let parts = [(Rational::from((5, 48)), &s)];
    Ok(combine(&parts, Rational::from((1, 4)), ctx.bits(), "(5*S_(-2,1) + 12)/48".into()))
}

/// Mean of `S(Φ_n)(1)/φ(n)²`: `-(𝔖_{(-4,2)} + 3)/24`.
pub fn schwarzian_main_coefficient(ctx: &PrecisionContext) -> Result<ConstantValue> {
    let s = singular_series_accelerated(&theta_from_exponents(&ExponentVector::new(vec![-4, 2])), ctx)?;
    let parts = [(Rational::from((-1, 24)), &s)];
    Ok(combine(&parts, Rational::from((-1, 8)), ctx.bits(), "-(S_(-4,2) + 3)/24".into()))
}
