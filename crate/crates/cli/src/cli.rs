//! Argument definitions and their translation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use jtq_core::constants::{Method, PrecisionContext};
use jtq_core::lab::{LabConfig, TheoremId};
use jtq_core::multiplicative::ExponentVector;

use crate::{CliError, Command, ConstantTarget, Format, RunConfig};

fn parse_e(s: &str) -> Result<ExponentVector, String> {
    s.parse().map_err(|e: jtq_core::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "jtq", version, about = "Jordan totient quotients, Euler-product constants and cyclotomic derivatives")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for bulk sieves.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for the spot-check subsample.
    #[arg(long, global = true, default_value_t = LabConfig::default().seed)]
    pub seed: u64,
    /// Decimal digits for constants and rendered decimals.
    #[arg(long, global = true, env = "JTQ_DIGITS", default_value_t = 50)]
    pub digits: u32,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Truncated,
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Thm1,
    Thm2,
    Prop1,
    Cor1,
    Thm3,
    Thm4,
    Thm5,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Euler-product constant S_e, or S_k(Phi).
    Constants {
        #[arg(long, value_parser = parse_e, allow_hyphen_values = true, conflicts_with = "k", required_unless_present = "k")]
        e: Option<ExponentVector>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = MethodArg::Accelerated)]
        method: MethodArg,
        /// Prime limit of the truncated product.
        #[arg(long, default_value_t = 1_000_000)]
        plimit: u64,
        /// Primes multiplied directly by the accelerated method.
        #[arg(long, default_value_t = 100)]
        direct_limit: u64,
        /// Series order of the accelerated tail.
        #[arg(long, default_value_t = 60)]
        tail_order: u32,
    },
    /// k-th derivative of Phi_n at z, exact.
    Cyclotomic {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        z: i64,
    },
    /// J_e(n), exact.
    Jordan {
        #[arg(long, value_parser = parse_e, allow_hyphen_values = true)]
        e: ExponentVector,
        #[arg(long)]
        n: u64,
    },
    /// Sum of J_e(n) n^beta over n <= x, for each x.
    Sum {
        #[arg(long, value_parser = parse_e, allow_hyphen_values = true)]
        e: ExponentVector,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
    },
    /// Numerical check of a mean-value theorem up to xmax.
    Verify {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, default_value_t = 1_000_000)]
        xmax: u64,
        #[arg(long, value_parser = parse_e, allow_hyphen_values = true)]
        e: Option<ExponentVector>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        grid_start: u64,
        #[arg(long, default_value_t = 20)]
        per_decade: u32,
        #[arg(long, default_value_t = 0.01)]
        spot_fraction: f64,
    },
    /// Re-run the config embedded in a JSON output and compare.
    Replay {
        #[arg(long)]
        input: PathBuf,
    },
}

fn theorem_id(theorem: TheoremArg, e: Option<ExponentVector>, k: Option<u32>, beta: Option<f64>) -> Result<TheoremId, CliError> {
    let need_e = || e.clone().ok_or_else(|| CliError::Usage(format!("{theorem:?} needs --e")));
    let need_k = || k.ok_or_else(|| CliError::Usage(format!("{theorem:?} needs --k")));
    Ok(match theorem {
        TheoremArg::Thm1 => TheoremId::Thm1 { e: need_e()? },
        TheoremArg::Thm2 => TheoremId::Thm2 { e: need_e()? },
        TheoremArg::Prop1 => TheoremId::Prop1 { e: need_e()?, beta: beta.unwrap_or(0.0) },
        TheoremArg::Cor1 => TheoremId::Cor1 { k: need_k()? },
        TheoremArg::Thm3 => TheoremId::Thm3 { k: need_k()? },
        TheoremArg::Thm4 => TheoremId::Thm4,
        TheoremArg::Thm5 => TheoremId::Thm5,
    })
}

impl Cli {
    /// The run config for every subcommand except `replay`.
    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let digits = self.digits;
        let command = match &self.command {
            Sub::Constants { e, k, method, plimit, direct_limit, tail_order } => {
                let target = match (e, k) {
                    (Some(e), _) => ConstantTarget::E(e.clone()),
                    (None, Some(k)) => ConstantTarget::K(*k),
                    (None, None) => return Err(CliError::Usage("constants needs --e or --k".into())),
                };
                let precision = PrecisionContext {
                    decimal_digits: digits,
                    direct_prime_limit: *direct_limit,
                    tail_series_order: *tail_order,
                };
                let method = match method {
                    MethodArg::Truncated => Method::Truncated,
                    MethodArg::Accelerated => Method::Accelerated,
                };
                Command::Constants { target, method, prime_limit: *plimit, precision }
            }
            Sub::Cyclotomic { n, k, z } => Command::Cyclotomic { n: *n, k: *k, z: *z, digits },
            Sub::Jordan { e, n } => Command::Jordan { e: e.clone(), n: *n, digits },
            Sub::Sum { e, beta, x } => Command::Sum { e: e.clone(), beta: *beta, x: x.clone(), digits },
            Sub::Verify { theorem, xmax, e, k, beta, grid_start, per_decade, spot_fraction } => {
                let lab = LabConfig {
                    grid_start: *grid_start,
                    per_decade: *per_decade,
                    precision: PrecisionContext::with_digits(digits),
                    seed: self.seed,
                    spot_fraction: *spot_fraction,
                    ..LabConfig::default()
                };
                Command::Verify { theorem: theorem_id(*theorem, e.clone(), *k, *beta)?, x_max: *xmax, lab }
            }
            Sub::Replay { .. } => return Err(CliError::Usage("replay carries no run config of its own".into())),
        };
        Ok(RunConfig { command, format: self.format, seed: self.seed, threads: self.threads })
    }
}
