use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::ops::Pow;
use rug::Float;

use crate::combinatorics::bernoulli_numbers;
use crate::multiplicative::{mobius, FactoredInteger};
use crate::{Error, PrecisionContext, Result};

type Memo = Mutex<HashMap<(u64, u32), Float>>;

fn zeta_memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn prime_zeta_memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn memoised(memo: &Memo, s: f64, prec: u32, compute: impl FnOnce() -> Result<Float>) -> Result<Float> {
    let key = (s.to_bits(), prec);
    if let Some(v) = memo.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(v.clone());
    }
    let v = compute()?;
    memo.lock().unwrap_or_else(|e| e.into_inner()).entry(key).or_insert_with(|| v.clone());
    Ok(v)
}

/// `ζ(s) - 1` by Euler–Maclaurin summation, with relative error below
/// `2^{-prec}`.
///
/// `ζ(s) - 1 = Σ_{n=2}^{N-1} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
///           + Σ_j B_{2j}/(2j)! · s(s+1)⋯(s+2j-2) · N^{-s-2j+1}`.
pub(crate) fn zeta_minus_one(s: f64, prec: u32) -> Result<Float> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("zeta needs real s > 1, got {s}")));
    }
    let work = prec + 16;
    // The correction terms shrink like (s+2j)²/(2πN)² until j ≈ πN, where the
    // smallest term is about e^{-2πN}.
    let n_cut = (f64::from(work) * std::f64::consts::LN_2 / std::f64::consts::TAU).ceil() as u64 + 8;
    let sf = Float::with_val(work, s);
    let neg_s = Float::with_val(work, -&sf);

    let mut sum = Float::with_val(work, 0);
    for n in 2..n_cut {
        sum += Float::with_val(work, n).pow(&neg_s);
    }
    let n_pow = Float::with_val(work, n_cut).pow(&neg_s); // N^{-s}
    let nf = Float::with_val(work, n_cut);
    sum += Float::with_val(work, &n_pow * &nf) / Float::with_val(work, &sf - 1u32);
    sum += Float::with_val(work, &n_pow / 2u32);

    let tolerance = {
        let mut t = Float::with_val(work, sum.clone().abs());
        t >>= work;
        t
    };
    let max_terms = (4 * n_cut) as usize;
    let bern = bernoulli_numbers(2 * max_terms + 2);
    // rising = s(s+1)⋯(s+2j-2), power = N^{-s-2j+1}, fact = (2j)!
    let mut rising = sf.clone();
    let mut power = Float::with_val(work, &n_pow / &nf);
    let mut fact = Float::with_val(work, 2);
    let n_sq = Float::with_val(work, &nf * &nf);
    for j in 1..=max_terms {
        if j > 1 {
            let a = Float::with_val(work, &sf + (2 * j - 3) as u32);
            let b = Float::with_val(work, &sf + (2 * j - 2) as u32);
            rising *= a;
            rising *= b;
            power /= &n_sq;
            fact *= ((2 * j - 1) * (2 * j)) as u32;
        }
        let b2j = Float::with_val(work, &bern[2 * j]);
        let mut term = Float::with_val(work, &b2j * &rising);
        term *= &power;
        term /= &fact;
        sum += &term;
        if term.abs() < tolerance {
            return Ok(Float::with_val(prec, &sum));
        }
    }
    Err(Error::Precision(format!("Euler–Maclaurin for zeta({s}) did not converge")))
}

/// Riemann zeta at real `s > 1`.
pub fn zeta_real(s: f64, ctx: &PrecisionContext) -> Result<Float> {
    zeta_prec(s, ctx.bits())
}

pub(crate) fn zeta_prec(s: f64, prec: u32) -> Result<Float> {
    memoised(zeta_memo(), s, prec, || Ok(zeta_minus_one(s, prec)? + 1u32))
}

/// Prime zeta `P(s) = Σ_p p^{-s} = Σ_{k≥1} μ(k)/k · log ζ(ks)`.
///
/// The omitted terms satisfy `|log ζ(t)| ≤ ζ(t) - 1 ≤ 3·2^{-t}` for `t ≥ 2`,
/// so truncating at `K` leaves at most `3·2^{-(K+1)s}/(1 - 2^{-s})`; `K` is
/// chosen to push that below the working precision.
pub fn prime_zeta(s: f64, ctx: &PrecisionContext) -> Result<Float> {
    prime_zeta_prec(s, ctx.bits())
}

pub(crate) fn prime_zeta_prec(s: f64, prec: u32) -> Result<Float> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("prime zeta needs real s > 1, got {s}")));
    }
    memoised(prime_zeta_memo(), s, prec, || {
        let work = prec + 16;
        let geometric = -(1.0 - (-s).exp2()).log2();
        let k_max = ((f64::from(work) + 4.0 + geometric) / s).ceil().max(1.0) as u64;
        let mut total = Float::with_val(work, 0);
        for k in 1..=k_max {
            let mu = mobius(&FactoredInteger::new(k));
            if mu == 0 {
                continue;
            }
            let mut term = zeta_minus_one(k as f64 * s, work)?.ln_1p();
            term /= k as u32;
            if mu > 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(Float::with_val(prec, &total))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn close(a: &Float, b: &Float, digits: i32) -> bool {
        let diff = Float::with_val(a.prec(), a - b).abs();
        diff.to_f64() <= 10f64.powi(-digits) * b.to_f64().abs().max(1.0)
    }

    #[test]
    fn zeta_even_values() {
        let ctx = PrecisionContext::with_digits(60);
        let prec = ctx.bits();
        let pi = Float::with_val(prec, Constant::Pi);
        let z2 = Float::with_val(prec, pi.clone().square() / 6u32);
        let pi4 = Float::with_val(prec, pi.pow(4u32));
        let z4 = Float::with_val(prec, pi4 / 90u32);
        assert!(close(&zeta_real(2.0, &ctx).unwrap(), &z2, 58));
        assert!(close(&zeta_real(4.0, &ctx).unwrap(), &z4, 58));
        assert!(zeta_real(2.0, &ctx).unwrap().to_string_radix(10, Some(11)).starts_with("1.6449340668"));
    }

    #[test]
    fn zeta_three_against_direct_series() {
        // Σ_{n<M} n^{-3} plus the Euler–Maclaurin tail of the remainder, in
        // plain rational-free float arithmetic at a different cutoff.
        let prec = 200;
        let m = 2000u32;
        let mut direct = Float::with_val(prec, 0);
        for n in 1..m {
            direct += Float::with_val(prec, n).pow(-3i32);
        }
        let mf = Float::with_val(prec, m);
        // Σ_{n≥M} n^{-3} = M^{-2}/2 + M^{-3}/2 + M^{-4}/4 - M^{-6}/12 + O(M^{-8})
        let tail = Float::with_val(prec, mf.clone().pow(-2i32) / 2u32)
            + Float::with_val(prec, mf.clone().pow(-3i32) / 2u32)
            + Float::with_val(prec, mf.clone().pow(-4i32) / 4u32)
            - Float::with_val(prec, mf.pow(-6i32) / 12u32);
        direct += tail;
        let ctx = PrecisionContext::with_digits(40);
        assert!(close(&zeta_real(3.0, &ctx).unwrap(), &direct, 25));
        // MPFR's own zeta as a third opinion
        let mpfr = Float::with_val(prec, Float::zeta_u(3));
        assert!(close(&zeta_real(3.0, &ctx).unwrap(), &mpfr, 40));
    }

    #[test]
    fn zeta_non_integer_argument() {
        let ctx = PrecisionContext::with_digits(40);
        let prec = ctx.bits();
        let expected = Float::with_val(prec, 2.5).zeta();
        assert!(close(&zeta_real(2.5, &ctx).unwrap(), &expected, 40));
        let expected = Float::with_val(prec, 1.25).zeta();
        assert!(close(&zeta_real(1.25, &ctx).unwrap(), &expected, 38));
    }

    #[test]
    fn zeta_domain() {
        let ctx = PrecisionContext::default();
        assert!(matches!(zeta_real(1.0, &ctx), Err(Error::Domain(_))));
        assert!(matches!(prime_zeta(0.5, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn prime_zeta_large_argument() {
        let ctx = PrecisionContext::with_digits(30);
        let p10 = prime_zeta(10.0, &ctx).unwrap();
        let mut direct = Float::with_val(ctx.bits(), 0);
        for p in (2u32..100).filter(|&n| (2..n).all(|d| n % d != 0)) {
            direct += Float::with_val(ctx.bits(), p).pow(-10i32);
        }
        // the remaining primes contribute less than ∫_{100}^∞ t^{-10} dt < 1.2e-19
        let diff = Float::with_val(ctx.bits(), &p10 - &direct).to_f64();
        assert!(diff < 1.2e-19 && diff > 0.0);
        assert!((p10.to_f64() - 2f64.powi(-10)) / p10.to_f64() < 0.06);
    }

    #[test]
    fn prime_zeta_precision_consistency() {
        let coarse = prime_zeta(2.0, &PrecisionContext::with_digits(20)).unwrap();
        let fine = prime_zeta(2.0, &PrecisionContext::with_digits(60)).unwrap();
        let diff = Float::with_val(200, &coarse - &fine).abs().to_f64();
        assert!(diff < 1e-20);
        assert!(fine.to_string_radix(10, Some(20)).starts_with("4.522474200410654985"));
    }
}
