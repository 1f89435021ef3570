use jtq_core::constants::*;
use jtq_core::multiplicative::{sieve_spf, theta_from_exponents, ExponentVector};
use rug::{Float, Rational};

fn seed(v: &[i32]) -> jtq_core::ThetaSpec {
    theta_from_exponents(&ExponentVector::new(v.to_vec()))
}

const MATRIX: [&[i32]; 10] = [
    &[-2, 1],
    &[-4, 2],
    &[-1, -1, 1],
    &[-6, 0, 2],
    &[2, -1],
    &[-3, 0, 1],
    &[-2, -2, 2],
    &[1, 1, -1],
    &[-4, 0, 0, 1],
    &[0, -2, 0, 1],
];

fn diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec().max(b.prec()), a - b).abs().to_f64()
}

#[test]
fn accelerated_matches_independent_high_precision_values() {
    // computed separately with mpmath's primezeta and Taylor expansion
    let cases = [
        (vec![-2, 1], "3.279577150984783607372919498914633983999"),
        (vec![-4, 2], "15.93965204288802036080638710545969189117"),
        (vec![-2], "4.431077829710815076254132844397764452782"),
    ];
    let ctx = PrecisionContext::with_digits(45);
    for (e, digits) in cases {
        let v = singular_series_accelerated(&seed(&e), &ctx).unwrap();
        let reference = Float::with_val(200, Float::parse(digits).unwrap());
        assert!(diff(&v.value, &reference) < 1e-38 * reference.to_f64(), "e={e:?}");
        assert!(v.error_bound < 1e-40);
    }
}

#[test]
fn cross_method_within_combined_bounds() {
    let ctx = PrecisionContext::default();
    for e in MATRIX {
        let theta = seed(e);
        let acc = singular_series_accelerated(&theta, &ctx).unwrap();
        let trunc = singular_series_truncated(&theta, 1_000_000, &ctx).unwrap();
        let d = diff(&acc.value, &trunc.value);
        assert!(d <= acc.error_bound + trunc.error_bound, "e={e:?}: {d} vs {}", trunc.error_bound);
        assert!(acc.value.is_sign_positive() && trunc.value.is_sign_positive(), "e={e:?}");
    }
}

#[test]
fn refinement_stays_inside_previous_bound() {
    for e in MATRIX {
        let theta = seed(e);
        let mut ctx = PrecisionContext::with_digits(40);
        let mut prev = singular_series_accelerated(&theta, &ctx).unwrap();
        for (p0, m) in [(200, 60), (200, 90), (1000, 120)] {
            ctx.direct_prime_limit = p0;
            ctx.tail_series_order = m;
            let next = singular_series_accelerated(&theta, &ctx).unwrap();
            assert!(diff(&next.value, &prev.value) <= prev.error_bound, "e={e:?} P0={p0} M={m}");
            prev = next;
        }
    }
}

#[test]
fn prime_zeta_two_against_direct_sum() {
    let table = sieve_spf(10_000_000).unwrap();
    let direct: f64 = table.primes().iter().rev().map(|&p| (p as f64).powi(-2)).sum();
    let ctx = PrecisionContext::default();
    let p2 = prime_zeta(2.0, &ctx).unwrap().to_f64();
    // Σ_{p>10^7} p^{-2} < 1/(10^7 · ln 10^7) < 7e-9
    assert!((p2 - direct).abs() < 1e-7);
    assert!(p2 > direct);
}

#[test]
fn sigma_phi_symbolic_assembly() {
    let ctx = PrecisionContext::with_digits(40);
    assert_eq!(sigma_k_phi(1, &ctx).unwrap().exact, Some(Rational::from((1, 2))));
    let s2 = sigma_k_phi(2, &ctx).unwrap();
    let s21 = singular_series_accelerated(&seed(&[-2, 1]), &ctx).unwrap();
    let by_hand = Float::with_val(200, &s21.value / 12u32) + Float::with_val(200, 0.25);
    assert!(diff(&s2.value, &by_hand) < 1e-30);
    for k in 1..=8 {
        let v = sigma_k_phi(k, &PrecisionContext::with_digits(20)).unwrap();
        assert!(v.value.is_finite() && v.error_bound < 1e-15, "k={k}");
    }
}

#[test]
fn expansion_rejects_small_direct_limit() {
    // θ_p = 4p/(p−1)² has series growth √5; P0 = 2 leaves q = √5/3 > 1/2
    let ctx = PrecisionContext { direct_prime_limit: 2, ..PrecisionContext::default() };
    assert!(matches!(
        singular_series_accelerated(&seed(&[-4, 2]), &ctx),
        Err(jtq_core::Error::ExpansionInvalid(_))
    ));
}

#[test]
fn overrides_raise_the_direct_limit() {
    let theta = seed(&[-2, 1]).with_override(211, Rational::from(1)).unwrap();
    let ctx = PrecisionContext::default();
    let acc = singular_series_accelerated(&theta, &ctx).unwrap();
    let base = singular_series_accelerated(&seed(&[-2, 1]), &ctx).unwrap();
    // the factor at 211 changes from 1 + 2/(211·210) to 1 + 1/211
    let ratio = Float::with_val(200, &acc.value / &base.value).to_f64();
    let expected = (1.0 + 1.0 / 211.0) / (1.0 + 2.0 / (211.0 * 210.0));
    assert!((ratio - expected).abs() < 1e-14);
}
