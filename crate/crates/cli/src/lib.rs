//! Command-line front end: argument parsing, execution and rendering.
//!
//! Every run is described by a serialisable [`RunConfig`] that is embedded in
//! the JSON output, so `jtq replay` can reproduce a result from its own file.

pub mod cli;
pub mod render;

use std::fmt;

use jtq_core::constants::{
    rational_decimal, sigma_k_phi, singular_series_accelerated, singular_series_truncated, ConstantValue, Method,
    PrecisionContext,
};
use jtq_core::cyclotomic::{cyclotomic_poly_cached, derivative_at};
use jtq_core::lab::{summatory_jordan, summatory_jordan_exact, verify_theorem, LabConfig, SummatoryReport, TheoremId};
use jtq_core::multiplicative::{jordan_quotient, theta_from_exponents, ExponentVector, FactoredInteger};
use jtq_core::{Error, ExactRational};
use serde::{Deserialize, Serialize};

/// Exact sums are used for integral `β` up to this `x`.
pub const EXACT_SUM_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantTarget {
    E(ExponentVector),
    K(u32),
}

impl fmt::Display for ConstantTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantTarget::E(e) => write!(f, "e={e}"),
            ConstantTarget::K(k) => write!(f, "k={k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    Constants { target: ConstantTarget, method: Method, prime_limit: u64, precision: PrecisionContext },
    Cyclotomic { n: u64, k: u32, z: i64, digits: u32 },
    Jordan { e: ExponentVector, n: u64, digits: u32 },
    Sum { e: ExponentVector, beta: f64, x: Vec<u64>, digits: u32 },
    Verify { theorem: TheoremId, x_max: u64, lab: LabConfig },
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    /// Unix seconds; taken from `SOURCE_DATE_EPOCH` when set.
    pub timestamp: u64,
}

impl Provenance {
    pub fn now() -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        Provenance { version: env!("CARGO_PKG_VERSION").to_string(), timestamp }
    }
}

/// The JSON document written for every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub config: RunConfig,
    pub results: Vec<serde_json::Value>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub target: String,
    pub method: Method,
    pub value: String,
    pub error_bound: f64,
    /// `p/q` when the value is known exactly.
    pub exact: Option<String>,
    pub factor_count: usize,
    pub inputs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclotomicRow {
    pub n: u64,
    pub k: u32,
    pub z: i64,
    pub degree: usize,
    pub value: String,
    pub derivative: String,
    /// `Φ_n^{(k)}(z)/Φ_n(z)`
    pub ratio: String,
    pub ratio_decimal: String,
    /// `Φ_n^{(k)}(z)/(φ(n)^k Φ_n(z))`
    pub normalized: String,
    pub normalized_decimal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanRow {
    pub e: ExponentVector,
    pub n: u64,
    pub weight: i64,
    pub value: String,
    pub decimal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRow {
    pub e: ExponentVector,
    pub beta: f64,
    pub x: u64,
    pub exact: Option<String>,
    pub value: String,
}

/// Typed results before serialisation.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Constant(ConstantRow),
    Cyclotomic(CyclotomicRow),
    Jordan(JordanRow),
    Sum(Vec<SumRow>),
    Verify(Box<SummatoryReport>),
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("results serialise to JSON")
}

impl Outcome {
    pub fn to_json(&self) -> Vec<serde_json::Value> {
        match self {
            Outcome::Constant(r) => vec![to_value(r)],
            Outcome::Cyclotomic(r) => vec![to_value(r)],
            Outcome::Jordan(r) => vec![to_value(r)],
            Outcome::Sum(rows) => rows.iter().map(to_value).collect(),
            Outcome::Verify(r) => vec![to_value(r.as_ref())],
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
    ReplayMismatch,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
            CliError::ReplayMismatch => f.write_str("replayed output differs from the input document"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 parse/usage, 3 precision, 4 domain, 5 capacity, 6 replay mismatch, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Parse(_)) | CliError::Usage(_) => 2,
            CliError::Core(Error::Precision(_) | Error::ExpansionInvalid(_) | Error::IllConditioned(_)) => 3,
            CliError::Core(Error::Domain(_) | Error::ZeroDenominator(_)) => 4,
            CliError::Core(Error::Capacity { .. }) => 5,
            CliError::ReplayMismatch => 6,
            CliError::Core(Error::Inconsistent(_)) | CliError::Io(_) => 1,
        }
    }
}

fn constant_row(target: &ConstantTarget, v: &ConstantValue, digits: u32) -> ConstantRow {
    ConstantRow {
        target: target.to_string(),
        method: v.method,
        value: v.to_decimal(digits as usize),
        error_bound: v.error_bound,
        exact: v.exact.as_ref().map(|r| r.to_string()),
        factor_count: v.factor_count,
        inputs: v.inputs.clone(),
    }
}

fn ratio_strings(r: &ExactRational, digits: u32) -> (String, String) {
    (r.to_string(), rational_decimal(r, digits as usize))
}

/// Runs one command.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    Ok(match &config.command {
        Command::Constants { target, method, prime_limit, precision } => {
            let v = match (target, method) {
                (ConstantTarget::E(e), Method::Truncated) => {
                    singular_series_truncated(&theta_from_exponents(e), *prime_limit, precision)?
                }
                (ConstantTarget::E(e), Method::Accelerated) => {
                    singular_series_accelerated(&theta_from_exponents(e), precision)?
                }
                (ConstantTarget::K(k), Method::Accelerated) => sigma_k_phi(*k as usize, precision)?,
                (ConstantTarget::K(_), Method::Truncated) => {
                    return Err(Error::Domain("S_k(Phi) is only assembled from accelerated products".into()).into())
                }
            };
            Outcome::Constant(constant_row(target, &v, precision.decimal_digits))
        }
        Command::Cyclotomic { n, k, z, digits } => {
            if *n == 0 {
                return Err(Error::Domain("n must be positive".into()).into());
            }
            let poly = cyclotomic_poly_cached(*n)?;
            let value = poly.eval(*z);
            if value == 0 {
                return Err(Error::ZeroDenominator(format!("Phi_{n}({z}) = 0")).into());
            }
            let derivative = derivative_at(&poly, *k, *z);
            let ratio = ExactRational::from((derivative.clone(), value.clone()));
            let scale = ExactRational::from(poly.degree() as u64);
            let mut normalized = ratio.clone();
            for _ in 0..*k {
                normalized /= &scale;
            }
            let (ratio_s, ratio_d) = ratio_strings(&ratio, *digits);
            let (norm_s, norm_d) = ratio_strings(&normalized, *digits);
            Outcome::Cyclotomic(CyclotomicRow {
                n: *n,
                k: *k,
                z: *z,
                degree: poly.degree(),
                value: value.to_string(),
                derivative: derivative.to_string(),
                ratio: ratio_s,
                ratio_decimal: ratio_d,
                normalized: norm_s,
                normalized_decimal: norm_d,
            })
        }
        Command::Jordan { e, n, digits } => {
            if *n == 0 {
                return Err(Error::Domain("n must be positive".into()).into());
            }
            let value = jordan_quotient(e, &FactoredInteger::new(*n));
            let (value, decimal) = ratio_strings(&value, *digits);
            Outcome::Jordan(JordanRow { e: e.clone(), n: *n, weight: e.weight(), value, decimal })
        }
        Command::Sum { e, beta, x, digits } => {
            let mut grid = x.clone();
            grid.sort_unstable();
            grid.dedup();
            if grid.first() == Some(&0) || grid.is_empty() {
                return Err(Error::Domain("sum limits must be positive".into()).into());
            }
            let exact = beta.fract() == 0.0 && beta.abs() <= 64.0 && *grid.last().unwrap() <= EXACT_SUM_LIMIT;
            let rows = if exact {
                summatory_jordan_exact(e, *beta as i32, &grid)?
                    .into_iter()
                    .zip(&grid)
                    .map(|(s, &x)| SumRow {
                        e: e.clone(),
                        beta: *beta,
                        x,
                        value: rational_decimal(&s, *digits as usize),
                        exact: Some(s.to_string()),
                    })
                    .collect()
            } else {
                summatory_jordan(e, *beta, &grid)?
                    .into_iter()
                    .zip(&grid)
                    .map(|(s, &x)| SumRow { e: e.clone(), beta: *beta, x, exact: None, value: format!("{s:e}") })
                    .collect()
            };
            Outcome::Sum(rows)
        }
        Command::Verify { theorem, x_max, lab } => {
            let lab = LabConfig { seed: config.seed, ..lab.clone() };
            Outcome::Verify(Box::new(verify_theorem(theorem, *x_max, &lab)?))
        }
    })
}

/// Executes `config` and assembles the output document.
pub fn document(config: &RunConfig, provenance: Provenance) -> Result<(Document, Outcome), CliError> {
    let outcome = execute(config)?;
    let doc = Document { config: config.clone(), results: outcome.to_json(), provenance };
    Ok((doc, outcome))
}

/// Re-runs the config embedded in a JSON document, keeping its provenance.
///
/// Returns the re-rendered document and whether it matches `input` exactly.
pub fn replay(input: &str) -> Result<(String, bool), CliError> {
    let original: Document =
        serde_json::from_str(input).map_err(|e| CliError::Core(Error::Parse(format!("replay input: {e}"))))?;
    let mut config = original.config.clone();
    config.format = Format::Json;
    let (doc, _) = document(&config, original.provenance.clone())?;
    let text = render::json(&doc);
    let same = text.trim_end() == input.trim_end();
    Ok((text, same))
}
