use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use crate::multiplicative::sieve::sieve_spf;
use crate::{Error, ExponentVector, FactoredInteger, Result, SpfTable};

/// `θ_p` as a rational function of `u = 1/p`: `θ_p = numer(u) / denom(u)`.
///
/// Coefficients are listed from `u^0` upwards.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaRule {
    numer: Vec<Rational>,
    denom: Vec<Rational>,
}

impl ThetaRule {
    pub fn zero() -> Self {
        ThetaRule { numer: Vec::new(), denom: vec![Rational::from(1)] }
    }

    /// Rule given directly in powers of `u = 1/p`.
    pub fn in_inverse_prime(numer: Vec<Rational>, denom: Vec<Rational>) -> Result<Self> {
        let numer = trim(numer);
        let denom = trim(denom);
        if denom.is_empty() {
            return Err(Error::Domain("theta rule has a zero denominator".into()));
        }
        let rule = ThetaRule { numer, denom };
        if let Some(p) = rule.vanishing_prime() {
            return Err(Error::Domain(format!("theta rule denominator vanishes at p = {p}")));
        }
        Ok(rule)
    }

    /// Rule given as `N(p)/D(p)` with coefficients in powers of `p`.
    pub fn in_prime(numer: Vec<Rational>, denom: Vec<Rational>) -> Result<Self> {
        let numer = trim(numer);
        let denom = trim(denom);
        if denom.is_empty() {
            return Err(Error::Domain("theta rule has a zero denominator".into()));
        }
        if numer.is_empty() {
            return Ok(ThetaRule::zero());
        }
        // N(1/u) / D(1/u) = u^{deg D - deg N} · rev(N)(u) / rev(D)(u)
        let (dn, dd) = (numer.len() - 1, denom.len() - 1);
        let mut rn: Vec<Rational> = numer.into_iter().rev().collect();
        let mut rd: Vec<Rational> = denom.into_iter().rev().collect();
        if dd >= dn {
            let mut shifted = vec![Rational::new(); dd - dn];
            shifted.append(&mut rn);
            rn = shifted;
        } else {
            let mut shifted = vec![Rational::new(); dn - dd];
            shifted.append(&mut rd);
            rd = shifted;
        }
        ThetaRule::in_inverse_prime(rn, rd)
    }

    pub fn numer(&self) -> &[Rational] {
        &self.numer
    }

    pub fn denom(&self) -> &[Rational] {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_empty()
    }

    pub fn eval(&self, p: u64) -> Rational {
        let u = Rational::from((1u64, p));
        let d = horner(&self.denom, &u);
        assert!(d != 0, "theta rule denominator vanishes at p = {p}");
        horner(&self.numer, &u) / d
    }

    pub fn eval_f64(&self, p: u64) -> f64 {
        let u = 1.0 / p as f64;
        let h = |c: &[Rational]| c.iter().rev().fold(0.0, |acc, c| acc * u + c.to_f64());
        h(&self.numer) / h(&self.denom)
    }

    /// Power-series coefficients of `θ(u)` for `u^0..=u^order`.
    pub fn series(&self, order: usize) -> Result<Vec<Rational>> {
        if self.denom[0] == 0 {
            return Err(Error::ExpansionInvalid(
                "theta rule grows with p; no expansion in 1/p exists".into(),
            ));
        }
        Ok(series_div(&self.numer, &self.denom, order))
    }

    /// A prime at which the denominator vanishes, if any.
    fn vanishing_prime(&self) -> Option<u64> {
        // In p-form the denominator is Σ c_i p^{deg-i}; its integer roots obey
        // the Cauchy bound relative to the leading non-zero coefficient.
        let lead_idx = self.denom.iter().position(|c| *c != 0)?;
        let lead = Rational::from(self.denom[lead_idx].abs_ref());
        let mut bound = 1.0f64;
        for c in &self.denom[lead_idx + 1..] {
            let ratio = Rational::from(c.abs_ref()) / &lead;
            bound = bound.max(1.0 + ratio.to_f64());
        }
        let bound = bound.min(1e7) as u64;
        (2..=bound)
            .filter(|&p| FactoredInteger::new(p).factors() == [(p, 1)])
            .find(|&p| horner(&self.denom, &Rational::from((1u64, p))) == 0)
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| *c == 0) {
        v.pop();
    }
    v
}

fn horner(coeffs: &[Rational], u: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in coeffs.iter().rev() {
        acc *= u;
        acc += c;
    }
    acc
}

pub(crate) fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

/// Truncated power-series quotient `a / b` up to `u^order`; needs `b[0] ≠ 0`.
pub(crate) fn series_div(a: &[Rational], b: &[Rational], order: usize) -> Vec<Rational> {
    let b0_inv = Rational::from(b[0].recip_ref());
    let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut acc = a.get(m).cloned().unwrap_or_default();
        for j in 1..=m.min(b.len() - 1) {
            acc -= Rational::from(&b[j] * &q[m - j]);
        }
        q.push(acc * &b0_inv);
    }
    q
}

/// Constants of the growth conditions on `θ`:
/// `Σ_{p≤x} |θ_p|/p^σ ≤ κ log log x + A` and `θ_p = α/p + O(p^{-1-λ})`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GrowthCertificate {
    pub alpha: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub kappa: f64,
    /// Estimated over primes up to [`GrowthCertificate::A_ESTIMATE_LIMIT`].
    pub a: f64,
}

impl GrowthCertificate {
    pub const A_ESTIMATE_LIMIT: u64 = 10_000;

    /// Smallest `A` making the first condition hold for all `x` up to the
    /// estimate limit. The left side only jumps at primes, so checking there
    /// suffices.
    fn estimate_a(theta: &ThetaSpec, sigma: f64, kappa: f64) -> f64 {
        let table = sieve_spf(Self::A_ESTIMATE_LIMIT).expect("small sieve");
        let mut partial = 0.0;
        let mut a: f64 = 0.0;
        for &p in table.primes() {
            let p = u64::from(p);
            partial += theta.theta_p_f64(p).abs() / (p as f64).powf(sigma);
            a = a.max(partial - kappa * (p as f64).ln().ln());
        }
        a
    }
}

/// A prime-indexed seed `θ_p` defining the θ-totient `φ_θ(n) = Π_{p|n}(1 + θ_p)`.
///
/// Finite per-prime overrides take precedence over the closed-form rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSpec {
    rule: ThetaRule,
    overrides: BTreeMap<u64, Rational>,
    certificate: Option<GrowthCertificate>,
    source: Option<ExponentVector>,
}

impl ThetaSpec {
    pub fn new(rule: ThetaRule) -> Self {
        ThetaSpec { rule, overrides: BTreeMap::new(), certificate: None, source: None }
    }

    pub fn zero() -> Self {
        ThetaSpec::new(ThetaRule::zero())
    }

    /// Replaces `θ_p` at a single prime.
    pub fn with_override(mut self, p: u64, value: Rational) -> Result<Self> {
        if p < 2 || FactoredInteger::new(p).factors() != [(p, 1)] {
            return Err(Error::Domain(format!("override key {p} is not prime")));
        }
        self.overrides.insert(p, value);
        Ok(self)
    }

    pub fn with_certificate(mut self, certificate: GrowthCertificate) -> Self {
        self.certificate = Some(certificate);
        self
    }

    pub fn rule(&self) -> &ThetaRule {
        &self.rule
    }

    pub fn overrides(&self) -> &BTreeMap<u64, Rational> {
        &self.overrides
    }

    pub fn certificate(&self) -> Option<&GrowthCertificate> {
        self.certificate.as_ref()
    }

    /// The exponent vector this seed was built from, if any.
    pub fn source_exponents(&self) -> Option<&ExponentVector> {
        self.source.as_ref()
    }

    pub fn max_override_prime(&self) -> Option<u64> {
        self.overrides.keys().next_back().copied()
    }

    /// True when `θ_p = 0` at every prime.
    pub fn is_identically_zero(&self) -> bool {
        self.rule.is_zero() && self.overrides.values().all(|v| *v == 0)
    }

    pub fn theta_p(&self, p: u64) -> Rational {
        match self.overrides.get(&p) {
            Some(v) => v.clone(),
            None => self.rule.eval(p),
        }
    }

    pub fn theta_p_f64(&self, p: u64) -> f64 {
        match self.overrides.get(&p) {
            Some(v) => v.to_f64(),
            None => self.rule.eval_f64(p),
        }
    }

    /// The local factor `1 + θ_p`.
    pub fn local_factor(&self, p: u64) -> Rational {
        self.theta_p(p) + 1u32
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Some(e) => write!(f, "J_e(n)/n^w with e={e}")?,
            None => {
                write!(f, "theta(u=1/p) = [")?;
                for (i, c) in self.rule.numer.iter().enumerate() {
                    write!(f, "{}{c}", if i > 0 { "," } else { "" })?;
                }
                write!(f, "]/[")?;
                for (i, c) in self.rule.denom.iter().enumerate() {
                    write!(f, "{}{c}", if i > 0 { "," } else { "" })?;
                }
                write!(f, "]")?;
            }
        }
        for (p, v) in &self.overrides {
            write!(f, ", theta_{p}={v}")?;
        }
        Ok(())
    }
}

fn one_minus_u_pow(i: u32, e: u32) -> Vec<Rational> {
    let mut base = vec![Rational::new(); i as usize + 1];
    base[0] = Rational::from(1);
    base[i as usize] = Rational::from(-1);
    let mut acc = vec![Rational::from(1)];
    for _ in 0..e {
        acc = poly_mul(&acc, &base);
    }
    acc
}

/// The seed of the normalised quotient `J_e(n)/n^w`:
/// `θ_p = Π_i (1 - p^{-i})^{e_i} - 1`.
pub fn theta_from_exponents(e: &ExponentVector) -> ThetaSpec {
    let mut pos = vec![Rational::from(1)];
    let mut neg = vec![Rational::from(1)];
    for (i, ei) in e.iter() {
        if ei > 0 {
            pos = poly_mul(&pos, &one_minus_u_pow(i, ei as u32));
        } else {
            neg = poly_mul(&neg, &one_minus_u_pow(i, (-ei) as u32));
        }
    }
    let len = pos.len().max(neg.len());
    let numer: Vec<Rational> = (0..len)
        .map(|j| {
            let a = pos.get(j).cloned().unwrap_or_default();
            let b = neg.get(j).cloned().unwrap_or_default();
            a - b
        })
        .collect();
    let rule = ThetaRule { numer: trim(numer), denom: neg };
    let mut spec = ThetaSpec::new(rule);
    spec.source = Some(e.clone());
    let e1 = f64::from(e.first());
    let kappa = e1.abs();
    let a = GrowthCertificate::estimate_a(&spec, 0.0, kappa);
    // lambda = 1/4 is the value used for the balanced mean-value theorem.
    spec.certificate = Some(GrowthCertificate { alpha: -e1, lambda: 0.25, sigma: 0.0, kappa, a });
    spec
}

/// `φ_θ(n) = Π_{p|n} (1 + θ_p)`.
pub fn phi_theta(theta: &ThetaSpec, n: &FactoredInteger) -> Rational {
    let mut acc = Rational::from(1);
    for p in n.primes() {
        acc *= theta.local_factor(p);
    }
    acc
}

/// Evaluates a function of the squarefree kernel on `1..=x` in one pass over
/// the spf table: `f(n) = f(n/p)` if `p² | n`, else `f(n/p)·g(p)`, where
/// `p = spf(n)`. Entry `i` holds `f(i + 1)`.
pub fn sieve_kernel_function<T, G, M>(table: &SpfTable, x: u64, one: T, local: G, mul: M) -> Result<Vec<T>>
where
    T: Clone,
    G: Fn(u64) -> T,
    M: Fn(&T, &T) -> T,
{
    if x > table.limit() && x > 1 {
        return Err(Error::Capacity { requested: x, ceiling: table.limit() });
    }
    let len = x as usize;
    let mut values: Vec<T> = Vec::with_capacity(len);
    if len == 0 {
        return Ok(values);
    }
    values.push(one.clone());
    let mut local_at: Vec<Option<T>> = vec![None; len + 1];
    for n in 2..=len {
        let p = table.raw_spf(n);
        let m = n / p;
        let v = if table.repeats_least_prime(n) {
            values[m - 1].clone()
        } else {
            let g = local_at[p].get_or_insert_with(|| local(p as u64));
            mul(&values[m - 1], g)
        };
        values.push(v);
    }
    Ok(values)
}

fn table_for(x: u64) -> Result<Option<SpfTable>> {
    if x < 2 {
        Ok(None)
    } else {
        sieve_spf(x).map(Some)
    }
}

/// Exact `φ_θ(n)` for `n = 1..=x`; entry `i` holds `φ_θ(i + 1)`.
pub fn sieve_phi_theta(theta: &ThetaSpec, x: u64) -> Result<Vec<Rational>> {
    match table_for(x)? {
        None => Ok(vec![Rational::from(1); x as usize]),
        Some(table) => sieve_kernel_function(&table, x, Rational::from(1), |p| theta.local_factor(p), |a, b| {
            Rational::from(a * b)
        }),
    }
}

/// Floating-point `φ_θ(n)` for `n = 1..=x` (lossy); entry `i` holds `φ_θ(i + 1)`.
pub fn sieve_phi_theta_f64(theta: &ThetaSpec, x: u64) -> Result<Vec<f64>> {
    match table_for(x)? {
        None => Ok(vec![1.0; x as usize]),
        Some(table) => {
            sieve_kernel_function(&table, x, 1.0, |p| 1.0 + theta.theta_p_f64(p), |a, b| a * b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicative::jordan_quotient;
    use rug::ops::Pow;

    fn e(v: Vec<i32>) -> ExponentVector {
        ExponentVector::new(v)
    }

    #[test]
    fn dedekind_ratio_seed() {
        let theta = theta_from_exponents(&e(vec![-2, 1]));
        assert_eq!(theta.theta_p(3), 1);
        assert_eq!(theta.theta_p(2), 2);
        assert_eq!(theta.theta_p(7), Rational::from((2, 6)));
        let cert = theta.certificate().unwrap();
        assert_eq!(cert.alpha, 2.0);
        assert_eq!(cert.kappa, 2.0);
        assert_eq!(cert.lambda, 0.25);
        assert!(cert.a >= 0.0);
    }

    #[test]
    fn zero_vector_seed() {
        let theta = theta_from_exponents(&ExponentVector::zero());
        assert!(theta.is_identically_zero());
        for p in [2, 3, 5, 101] {
            assert_eq!(theta.theta_p(p), 0);
        }
    }

    #[test]
    fn odd_support_override() {
        let theta = theta_from_exponents(&e(vec![-2, 1])).with_override(2, Rational::from(-1)).unwrap();
        assert_eq!(phi_theta(&theta, &FactoredInteger::new(6)), 0);
        assert_eq!(phi_theta(&theta, &FactoredInteger::new(15)), Rational::from(2) * Rational::from((3, 2)));
        assert!(theta.clone().with_override(4, Rational::new()).is_err());
    }

    #[test]
    fn phi_theta_examples() {
        let theta = theta_from_exponents(&e(vec![-2, 1]));
        assert_eq!(phi_theta(&theta, &FactoredInteger::new(6)), 6);
        assert_eq!(phi_theta(&theta, &FactoredInteger::new(1)), 1);
    }

    #[test]
    fn sieve_examples() {
        let theta = theta_from_exponents(&e(vec![-2, 1]));
        let v = sieve_phi_theta(&theta, 4).unwrap();
        assert_eq!(v, vec![Rational::from(1), Rational::from(3), Rational::from(2), Rational::from(3)]);
        let total: Rational = sieve_phi_theta(&theta, 10).unwrap().into_iter().sum();
        assert_eq!(total, Rational::from((82, 3)));
        let ones = sieve_phi_theta(&ThetaSpec::zero(), 3).unwrap();
        assert_eq!(ones, vec![Rational::from(1); 3]);
        assert_eq!(sieve_phi_theta(&theta, 1).unwrap(), vec![Rational::from(1)]);
    }

    #[test]
    fn sieve_matches_direct_quotient() {
        let vecs = [vec![-2, 1], vec![-4, 2], vec![1, -3, 1, 0, 0], vec![-1]];
        for v in vecs {
            let ev = e(v);
            let theta = theta_from_exponents(&ev);
            let sieved = sieve_phi_theta(&theta, 2000).unwrap();
            let floats = sieve_phi_theta_f64(&theta, 2000).unwrap();
            for n in 1..=2000u64 {
                let f = FactoredInteger::new(n);
                let normalised = jordan_quotient(&ev, &f) / Rational::from(n).pow(ev.weight() as i32);
                assert_eq!(sieved[n as usize - 1], normalised, "e={ev} n={n}");
                let rel = (floats[n as usize - 1] - normalised.to_f64()).abs() / normalised.to_f64().abs().max(1e-300);
                assert!(rel < 1e-12);
            }
        }
    }

    #[test]
    fn rule_in_prime_matches_quotient_seed() {
        // 4p/(p-1)^2 is the seed of e = (-4, 2)
        let rule = ThetaRule::in_prime(
            vec![Rational::new(), Rational::from(4)],
            vec![Rational::from(1), Rational::from(-2), Rational::from(1)],
        )
        .unwrap();
        let jordan = theta_from_exponents(&e(vec![-4, 2]));
        for p in [2u64, 3, 5, 7, 11, 1009] {
            assert_eq!(rule.eval(p), jordan.theta_p(p));
        }
        assert_eq!(rule.series(6).unwrap(), jordan.rule().series(6).unwrap());
    }

    #[test]
    fn vanishing_denominator_rejected() {
        // 1/(p - 3)
        let err = ThetaRule::in_prime(vec![Rational::from(1)], vec![Rational::from(-3), Rational::from(1)]);
        assert!(matches!(err, Err(Error::Domain(_))));
        let growing = ThetaRule::in_prime(vec![Rational::new(), Rational::from(1)], vec![Rational::from(1)]).unwrap();
        assert!(growing.series(4).is_err());
        assert_eq!(growing.eval(5), 5);
    }
}
