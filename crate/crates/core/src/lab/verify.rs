use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::fit::{fit_log_powers, LogFit};
use super::summatory::{geometric_grid, phi_theta_values, prefix_at, MainTerm};
use crate::constants::{
    decimal_string, phi_minus1_main_coefficient, schwarzian_main_coefficient, sigma_k_phi,
    singular_series_accelerated, ConstantValue,
};
use crate::cyclotomic::{
    cyclotomic_poly_cached, lehmer_ratio, normalized_derivative, schwarzian_at_1, schwarzian_of,
    second_derivative_ratio_minus1, LehmerExpansion,
};
use crate::multiplicative::{
    euler_phi, jordan_quotient, jordan_totient_by_mobius, sieve_spf, theta_from_exponents, ExponentVector,
    FactoredInteger, SpfTable,
};
use crate::{Error, PrecisionContext, Result};

/// Which mean-value statement to check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "lowercase")]
pub enum TheoremId {
    /// `Σ J_e(n)` for balanced `e`, with the log-power secondary terms.
    Thm1 { e: ExponentVector },
    /// `Σ J_e(n) = 𝔖_e x + O((log x)^{|e_1|})` for balanced `e`.
    Thm2 { e: ExponentVector },
    /// `Σ J_e(n) n^β = 𝔖_e M_{β+w}(x) + C + O(x^{β+w}(log x)^{|e_1|})`.
    Prop1 { e: ExponentVector, beta: f64 },
    /// `Σ n^{k-1}/φ(n)^k = 𝔖_{(-k)} log x + C_k + O((log x)^k/x)`.
    Cor1 { k: u32 },
    /// Normalised `k`-th derivatives of `Φ_n` at 1.
    Thm3 { k: u32 },
    /// Normalised second derivatives of `Φ_n` at −1.
    Thm4,
    /// Schwarzian derivatives of `Φ_n` at 1, over `φ(n)²`.
    Thm5,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremId::Thm1 { e } => write!(f, "thm1 e={e}"),
            TheoremId::Thm2 { e } => write!(f, "thm2 e={e}"),
            TheoremId::Prop1 { e, beta } => write!(f, "prop1 e={e} beta={beta}"),
            TheoremId::Cor1 { k } => write!(f, "cor1 k={k}"),
            TheoremId::Thm3 { k } => write!(f, "thm3 k={k}"),
            TheoremId::Thm4 => f.write_str("thm4"),
            TheoremId::Thm5 => f.write_str("thm5"),
        }
    }
}

/// Grid, precision and trend thresholds for [`verify_theorem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabConfig {
    pub grid_start: u64,
    pub per_decade: u32,
    pub precision: PrecisionContext,
    pub seed: u64,
    /// Fraction of `n` re-evaluated exactly as a spot check.
    pub spot_fraction: f64,
    /// Sampled `n` up to this bound are also checked against the polynomial oracle.
    pub oracle_limit: u64,
    pub max_derivative_order: u32,
    pub max_x: u64,
    /// Allowed max/min spread of the bound ratio over the last two decades.
    pub band_factor: f64,
    /// Post-fit RMS must be at most this fraction of the raw residual RMS.
    pub fit_fraction: f64,
    /// Last-decade drift allowance in units of the error envelope at `x_max`.
    pub drift_factor: f64,
    /// Relative tolerance of the windowed slope against the main coefficient.
    pub slope_tolerance: f64,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            grid_start: 1000,
            per_decade: 20,
            precision: PrecisionContext::with_digits(30),
            seed: 20_191_014,
            spot_fraction: 0.01,
            oracle_limit: 2000,
            max_derivative_order: 8,
            max_x: 100_000_000,
            band_factor: 2.0,
            fit_fraction: 0.1,
            drift_factor: 10.0,
            slope_tolerance: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheckSummary {
    pub sampled: usize,
    /// Samples also compared exactly against cyclotomic-polynomial or Möbius oracles.
    pub oracle_checked: usize,
    pub mismatches: usize,
    pub max_relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Everything computed for one theorem; all per-point arrays share the grid's length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummatoryReport {
    pub theorem: TheoremId,
    pub x_grid: Vec<u64>,
    pub sums: Vec<f64>,
    pub main_term: MainTerm,
    pub main_coefficient: f64,
    pub main_coefficient_decimal: String,
    pub main_coefficient_error: f64,
    pub predicted_main: Vec<f64>,
    /// `sums − predicted_main`.
    pub raw_residuals: Vec<f64>,
    /// Log-power fit of the raw residuals (estimates, not derived constants).
    pub fit: LogFit,
    /// The same fit with the constant column toggled.
    pub alternate_fit: LogFit,
    pub fitted: Vec<f64>,
    /// `raw_residuals − fitted`.
    pub residuals: Vec<f64>,
    pub envelope: Vec<f64>,
    pub bound_ratios: Vec<f64>,
    /// `(S(x) − S(⌊x/2⌋)) / (x − ⌊x/2⌋)`.
    pub window_slopes: Vec<f64>,
    pub spot_checks: SpotCheckSummary,
    pub checks: Vec<TrendCheck>,
}

impl SummatoryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Copy)]
enum RatioSource {
    Raw,
    PostFit,
    ConstantRemoved,
}

struct Plan {
    first_n: u64,
    main: ConstantValue,
    main_term: MainTerm,
    degree: usize,
    include_constant: bool,
    /// `(log x)^a (log log x)^b x^c`
    envelope: (f64, f64, f64),
    ratio_source: RatioSource,
}

fn jordan_plan(e: &ExponentVector, beta: f64, ctx: &PrecisionContext) -> Result<(ConstantValue, MainTerm)> {
    let main = singular_series_accelerated(&theta_from_exponents(e), ctx)?;
    Ok((main, MainTerm::new(beta + e.weight() as f64)))
}

fn plan(id: &TheoremId, config: &LabConfig) -> Result<Plan> {
    let ctx = &config.precision;
    let balanced = |e: &ExponentVector| {
        if e.is_balanced() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{e} has weight {}, not 0", e.weight())))
        }
    };
    Ok(match id {
        TheoremId::Thm1 { e } | TheoremId::Thm2 { e } => {
            balanced(e)?;
            let (main, main_term) = jordan_plan(e, 0.0, ctx)?;
            let a = f64::from(e.first().unsigned_abs());
            let thm1 = matches!(id, TheoremId::Thm1 { .. });
            Plan {
                first_n: 1,
                main,
                main_term,
                degree: e.first().unsigned_abs() as usize,
                include_constant: false,
                envelope: if thm1 { (2.0 * a / 3.0, 4.0 * a / 3.0, 0.0) } else { (a.max(1.0), 0.0, 0.0) },
                ratio_source: if thm1 { RatioSource::PostFit } else { RatioSource::Raw },
            }
        }
        TheoremId::Prop1 { e, beta } => prop1_plan(e, *beta, ctx)?,
        TheoremId::Cor1 { k } => {
            if *k == 0 {
                return Err(Error::Domain("k must be positive".into()));
            }
            prop1_plan(&ExponentVector::new(vec![-(*k as i32)]), f64::from(*k) - 1.0, ctx)?
        }
        TheoremId::Thm3 { k } => {
            if *k == 0 || *k > config.max_derivative_order {
                return Err(Error::Domain(format!(
                    "derivative order {k} outside 1..={}",
                    config.max_derivative_order
                )));
            }
            let kf = f64::from(*k);
            Plan {
                first_n: 2,
                main: sigma_k_phi(*k as usize, ctx)?,
                main_term: MainTerm::new(0.0),
                degree: *k as usize,
                include_constant: false,
                envelope: (2.0 * kf / 3.0, 4.0 * kf / 3.0, 0.0),
                ratio_source: RatioSource::PostFit,
            }
        }
        TheoremId::Thm4 => Plan {
            first_n: 3,
            main: phi_minus1_main_coefficient(ctx)?,
            main_term: MainTerm::new(0.0),
            degree: 2,
            include_constant: false,
            envelope: (4.0 / 3.0, 8.0 / 3.0, 0.0),
            ratio_source: RatioSource::PostFit,
        },
        TheoremId::Thm5 => Plan {
            first_n: 2,
            main: schwarzian_main_coefficient(ctx)?,
            main_term: MainTerm::new(0.0),
            degree: 4,
            include_constant: false,
            envelope: (8.0 / 3.0, 16.0 / 3.0, 0.0),
            ratio_source: RatioSource::PostFit,
        },
    })
}

fn prop1_plan(e: &ExponentVector, beta: f64, ctx: &PrecisionContext) -> Result<Plan> {
    let (main, main_term) = jordan_plan(e, beta, ctx)?;
    Ok(Plan {
        first_n: 1,
        main,
        main_term,
        degree: 0,
        include_constant: true,
        envelope: (f64::from(e.first().unsigned_abs()), 0.0, beta + e.weight() as f64),
        ratio_source: RatioSource::ConstantRemoved,
    })
}

/// Distinct prime factors of `n`, smallest first.
fn distinct_primes(table: &SpfTable, n: u64) -> Vec<u64> {
    let mut ps = Vec::with_capacity(8);
    table.for_each_prime_factor(n, |p| ps.push(p));
    ps
}

fn a_n(n: u64) -> f64 {
    match n % 4 {
        1 | 3 => 1.0,
        2 => 1.0 / 9.0,
        _ => 1.0 / 3.0,
    }
}

/// Floating-point summands `f(n)` for `n = 1..=x`, zero below `first_n`.
fn summands(id: &TheoremId, table: &SpfTable, x: u64, first_n: u64) -> Vec<f64> {
    let jordan = |e: &ExponentVector, beta: f64| {
        let mut v = phi_theta_values(&theta_from_exponents(e), table, x);
        let shift = beta + e.weight() as f64;
        if shift != 0.0 {
            v.par_iter_mut().enumerate().for_each(|(i, y)| *y *= ((i + 1) as f64).powf(shift));
        }
        v
    };
    let per_n = |f: &(dyn Fn(u64, &[u64]) -> f64 + Sync)| -> Vec<f64> {
        (1..=x)
            .into_par_iter()
            .map(|n| if n < first_n { 0.0 } else { f(n, &distinct_primes(table, n)) })
            .collect()
    };
    match id {
        TheoremId::Thm1 { e } | TheoremId::Thm2 { e } => jordan(e, 0.0),
        TheoremId::Prop1 { e, beta } => jordan(e, *beta),
        TheoremId::Cor1 { k } => jordan(&ExponentVector::new(vec![-(*k as i32)]), f64::from(*k) - 1.0),
        TheoremId::Thm3 { k } => {
            let expansion = LehmerExpansion::new(*k);
            per_n(&|n, ps| {
                let ratios: Vec<f64> = (1..=*k as i32)
                    .map(|h| ps.iter().fold(1.0, |acc, &p| acc * (1.0 - (p as f64).powi(-h))))
                    .collect();
                expansion.eval_normalized_f64(n, &ratios)
            })
        }
        TheoremId::Thm4 => per_n(&|n, ps| {
            let psi_over_phi: f64 = ps.iter().map(|&p| (p as f64 + 1.0) / (p as f64 - 1.0)).product();
            let phi = ps.iter().fold(n as f64, |acc, &p| acc * (1.0 - 1.0 / p as f64));
            0.25 + a_n(n) * psi_over_phi / 4.0 - 0.5 / phi
        }),
        TheoremId::Thm5 => per_n(&|n, ps| {
            let psi_over_phi: f64 = ps.iter().map(|&p| (p as f64 + 1.0) / (p as f64 - 1.0)).product();
            let phi = ps.iter().fold(n as f64, |acc, &p| acc * (1.0 - 1.0 / p as f64));
            -0.125 - psi_over_phi * psi_over_phi / 24.0 + 0.5 / (phi * phi)
        }),
    }
}

fn phi_pow(n: &FactoredInteger, k: u32) -> Rational {
    Rational::from(Integer::from(euler_phi(n)).pow(k))
}

/// Exact summand from the closed forms.
fn exact_summand(id: &TheoremId, n: &FactoredInteger) -> Result<f64> {
    let jordan = |e: &ExponentVector, beta: f64| jordan_quotient(e, n).to_f64() * (n.value() as f64).powf(beta);
    Ok(match id {
        TheoremId::Thm1 { e } | TheoremId::Thm2 { e } => jordan(e, 0.0),
        TheoremId::Prop1 { e, beta } => jordan(e, *beta),
        TheoremId::Cor1 { k } => jordan(&ExponentVector::new(vec![-(*k as i32)]), f64::from(*k) - 1.0),
        TheoremId::Thm3 { k } => (lehmer_ratio(n, *k)? / phi_pow(n, *k)).to_f64(),
        TheoremId::Thm4 => (second_derivative_ratio_minus1(n)? / phi_pow(n, 2)).to_f64(),
        TheoremId::Thm5 => (schwarzian_at_1(n)? / phi_pow(n, 2)).to_f64(),
    })
}

/// True when the closed form and the independent oracle agree exactly.
fn oracle_agrees(id: &TheoremId, n: &FactoredInteger) -> Result<bool> {
    let by_mobius = |e: &ExponentVector| {
        let mut acc = Rational::from(1);
        for (i, ei) in e.iter() {
            let j = Rational::from(jordan_totient_by_mobius(i, n));
            for _ in 0..ei.unsigned_abs() {
                if ei > 0 {
                    acc *= &j;
                } else {
                    acc /= &j;
                }
            }
        }
        acc == jordan_quotient(e, n)
    };
    let m = n.value();
    Ok(match id {
        TheoremId::Thm1 { e } | TheoremId::Thm2 { e } | TheoremId::Prop1 { e, .. } => by_mobius(e),
        TheoremId::Cor1 { k } => by_mobius(&ExponentVector::new(vec![-(*k as i32)])),
        TheoremId::Thm3 { k } => lehmer_ratio(n, *k)? / phi_pow(n, *k) == normalized_derivative(m, *k, 1)?,
        TheoremId::Thm4 => second_derivative_ratio_minus1(n)? / phi_pow(n, 2) == normalized_derivative(m, 2, -1)?,
        TheoremId::Thm5 => {
            let poly = cyclotomic_poly_cached(m)?;
            schwarzian_at_1(n)? == schwarzian_of(poly.coefficients(), 1)?
        }
    })
}

fn spot_check(id: &TheoremId, values: &[f64], table: &SpfTable, first_n: u64, config: &LabConfig) -> Result<SpotCheckSummary> {
    let x = values.len() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sample: Vec<u64> = (first_n.max(2)..=x).filter(|_| rng.gen::<f64>() < config.spot_fraction).collect();
    let outcomes = sample
        .par_iter()
        .map(|&n| -> Result<(f64, bool, bool)> {
            let f = table.factorize(n);
            let exact = exact_summand(id, &f)?;
            let fast = values[(n - 1) as usize];
            let rel = (fast - exact).abs() / exact.abs().max(1.0);
            let checked = n <= config.oracle_limit;
            let agrees = !checked || oracle_agrees(id, &f)?;
            Ok((rel, checked, agrees))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut summary = SpotCheckSummary { sampled: sample.len(), oracle_checked: 0, mismatches: 0, max_relative_error: 0.0 };
    for (rel, checked, agrees) in outcomes {
        summary.max_relative_error = summary.max_relative_error.max(rel);
        summary.oracle_checked += usize::from(checked);
        if rel > 1e-9 || !agrees {
            summary.mismatches += 1;
        }
    }
    Ok(summary)
}

/// Sums the theorem's summand up to `x_max`, subtracts the predicted main
/// term and reports residual trends.
///
/// The verdicts in `checks` are trend heuristics with the thresholds from
/// `config`; the underlying O-constants are unknown.
pub fn verify_theorem(id: &TheoremId, x_max: u64, config: &LabConfig) -> Result<SummatoryReport> {
    if x_max > config.max_x {
        return Err(Error::Capacity { requested: x_max, ceiling: config.max_x });
    }
    if x_max < 200 {
        return Err(Error::Domain(format!("x_max = {x_max} is too small for a two-decade grid")));
    }
    let plan = plan(id, config)?;
    let start = config.grid_start.min(x_max / 100).max(2);
    let grid = geometric_grid(start, x_max, config.per_decade)?;
    let table = sieve_spf(x_max)?;
    let values = summands(id, &table, x_max, plan.first_n);

    let mut points: Vec<u64> = grid.iter().flat_map(|&x| [x / 2, x]).filter(|&x| x >= 1).collect();
    points.sort_unstable();
    points.dedup();
    let at_points = prefix_at(&values, &points);
    let lookup = |x: u64| if x == 0 { 0.0 } else { at_points[points.binary_search(&x).unwrap()] };
    let sums: Vec<f64> = grid.iter().map(|&x| lookup(x)).collect();
    let window_slopes: Vec<f64> = grid.iter().map(|&x| (lookup(x) - lookup(x / 2)) / (x - x / 2) as f64).collect();

    let coeff = plan.main.to_f64();
    let predicted_main: Vec<f64> = grid.iter().map(|&x| coeff * plan.main_term.eval(x as f64)).collect();
    let raw_residuals: Vec<f64> = sums.iter().zip(&predicted_main).map(|(s, m)| s - m).collect();
    let fit = fit_log_powers(&raw_residuals, &grid, plan.degree, plan.include_constant)?;
    let alternate_fit = fit_log_powers(&raw_residuals, &grid, plan.degree, !plan.include_constant)?;
    let fitted: Vec<f64> = grid.iter().map(|&x| fit.eval(x as f64)).collect();
    let residuals: Vec<f64> = raw_residuals.iter().zip(&fitted).map(|(r, f)| r - f).collect();

    let (a, b, c) = plan.envelope;
    let env_at = |x: f64| x.ln().powf(a) * x.ln().ln().powf(b) * x.powf(c);
    let envelope: Vec<f64> = grid.iter().map(|&x| env_at(x as f64)).collect();
    let numerators: Vec<f64> = match plan.ratio_source {
        RatioSource::Raw => raw_residuals.clone(),
        RatioSource::PostFit => residuals.clone(),
        RatioSource::ConstantRemoved => raw_residuals.iter().map(|r| r - fit.coefficients[0]).collect(),
    };
    let bound_ratios: Vec<f64> = numerators.iter().zip(&envelope).map(|(r, e)| r.abs() / e).collect();

    let spot_checks = spot_check(id, &values, &table, plan.first_n, config)?;

    let mut checks = vec![TrendCheck {
        name: "spot-check mismatches".into(),
        value: spot_checks.mismatches as f64,
        threshold: 0.0,
        pass: spot_checks.mismatches == 0,
    }];
    let tail = |from: u64| grid.iter().zip(&bound_ratios).filter(move |(x, _)| **x >= from).map(|(_, r)| *r);
    match id {
        TheoremId::Thm2 { .. } => {
            let from = x_max / 100;
            let hi = tail(from).fold(f64::MIN, f64::max);
            let lo = tail(from).fold(f64::MAX, f64::min);
            let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };
            checks.push(TrendCheck {
                name: "bound-ratio spread over last two decades".into(),
                value: spread,
                threshold: config.band_factor,
                pass: spread <= config.band_factor,
            });
        }
        TheoremId::Prop1 { .. } | TheoremId::Cor1 { .. } => {
            let last: Vec<f64> = grid.iter().zip(&raw_residuals).filter(|(x, _)| **x >= x_max / 10).map(|(_, r)| *r).collect();
            let drift = last.iter().fold(f64::MIN, |m, &r| m.max(r)) - last.iter().fold(f64::MAX, |m, &r| m.min(r));
            let allowed = config.drift_factor * env_at(x_max as f64);
            checks.push(TrendCheck { name: "last-decade drift".into(), value: drift, threshold: allowed, pass: drift <= allowed });
        }
        _ => {}
    }
    if matches!(id, TheoremId::Thm1 { .. } | TheoremId::Thm3 { .. } | TheoremId::Thm4 | TheoremId::Thm5) {
        let ratio = if fit.input_rms > 0.0 { fit.rms / fit.input_rms } else { 0.0 };
        checks.push(TrendCheck {
            name: "post-fit rms / raw rms".into(),
            value: ratio,
            threshold: config.fit_fraction,
            pass: ratio <= config.fit_fraction,
        });
    }
    if matches!(id, TheoremId::Thm3 { .. } | TheoremId::Thm4 | TheoremId::Thm5) {
        let slope = *window_slopes.last().unwrap();
        let rel = (slope - coeff).abs() / coeff.abs();
        checks.push(TrendCheck {
            name: "windowed slope vs main coefficient".into(),
            value: rel,
            threshold: config.slope_tolerance,
            pass: rel <= config.slope_tolerance,
        });
    }

    Ok(SummatoryReport {
        theorem: id.clone(),
        x_grid: grid,
        sums,
        main_term: plan.main_term,
        main_coefficient: coeff,
        main_coefficient_decimal: decimal_string(&plan.main.value, config.precision.decimal_digits as usize),
        main_coefficient_error: plan.main.error_bound,
        predicted_main,
        raw_residuals,
        fit,
        alternate_fit,
        fitted,
        residuals,
        envelope,
        bound_ratios,
        window_slopes,
        spot_checks,
        checks,
    })
}
