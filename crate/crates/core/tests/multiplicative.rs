use jtq_core::multiplicative::*;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn f(n: u64) -> FactoredInteger {
    FactoredInteger::new(n)
}

fn exponent_vector() -> impl Strategy<Value = ExponentVector> {
    prop::collection::vec(-3i32..=3, 1..=4).prop_map(ExponentVector::new)
}

/// Shifts `e_1` so that the weight vanishes.
fn balanced(e: ExponentVector) -> ExponentVector {
    let mut v = e.entries().to_vec();
    if v.is_empty() {
        return e;
    }
    let w: i64 = v.iter().enumerate().skip(1).map(|(i, &x)| (i as i64 + 1) * i64::from(x)).sum();
    v[0] = -w as i32;
    ExponentVector::new(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplicative_on_coprime_pairs(m in 1u64..1_000_000, n in 1u64..1_000_000, e in exponent_vector()) {
        prop_assume!(gcd(m, n) == 1);
        let (fm, fn_, fmn) = (f(m), f(n), f(m * n));
        prop_assert_eq!(mobius(&fmn), mobius(&fm) * mobius(&fn_));
        prop_assert_eq!(euler_phi(&fmn), euler_phi(&fm) * euler_phi(&fn_));
        for k in 1..=4 {
            prop_assert_eq!(jordan_totient(k, &fmn), jordan_totient(k, &fm) * jordan_totient(k, &fn_));
        }
        prop_assert_eq!(jordan_quotient(&e, &fmn), jordan_quotient(&e, &fm) * jordan_quotient(&e, &fn_));
        let theta = theta_from_exponents(&e);
        prop_assert_eq!(phi_theta(&theta, &fmn), phi_theta(&theta, &fm) * phi_theta(&theta, &fn_));
    }

    #[test]
    fn balanced_quotients_see_only_the_kernel(n in 1u64..10_000, e in exponent_vector()) {
        let e = balanced(e);
        prop_assert!(e.is_balanced());
        let fact = f(n);
        prop_assert_eq!(jordan_quotient(&e, &fact), jordan_quotient(&e, &fact.radical()));
    }

    #[test]
    fn exponent_vector_text_round_trip(e in exponent_vector()) {
        let text = e.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let parsed: ExponentVector = if text.is_empty() { ExponentVector::zero() } else { text.parse().unwrap() };
        prop_assert_eq!(parsed, e);
    }
}

#[test]
fn divisor_sum_and_mobius_forms() {
    for n in 1..=10_000u64 {
        let fact = f(n);
        let ds = divisors(&fact);
        for k in 1..=4u32 {
            let total: Integer = ds.iter().map(|&d| jordan_totient(k, &f(d))).sum();
            assert_eq!(total, Integer::from(n).pow(k), "n={n} k={k}");
            assert_eq!(jordan_totient_by_mobius(k, &fact), jordan_totient(k, &fact), "n={n} k={k}");
        }
    }
}

#[test]
fn sieve_matches_direct_evaluation() {
    let seeds = [vec![-2, 1], vec![-4, 2], vec![-1], vec![1, -1, 1], vec![0, 0, 2, -1]];
    for e in seeds {
        let theta = theta_from_exponents(&ExponentVector::new(e));
        let bulk = sieve_phi_theta(&theta, 10_000).unwrap();
        for (i, v) in bulk.iter().enumerate() {
            assert_eq!(*v, phi_theta(&theta, &f(i as u64 + 1)), "{theta} n={}", i + 1);
        }
    }
}

#[test]
fn theta_totient_is_a_divisor_sum() {
    let theta = theta_from_exponents(&ExponentVector::new(vec![-3, 0, 1]))
        .with_override(2, Rational::from(-1))
        .unwrap();
    for n in 1..=2000u64 {
        let fact = f(n);
        let total: Rational = divisors(&fact)
            .into_iter()
            .map(|d| {
                let fd = f(d);
                if fd.is_squarefree() {
                    fd.primes().map(|p| theta.theta_p(p)).product()
                } else {
                    Rational::new()
                }
            })
            .sum();
        assert_eq!(total, phi_theta(&theta, &fact), "n={n}");
    }
}

#[test]
fn sieve_capacity_limit() {
    assert!(matches!(sieve_spf_with_ceiling(2_000, 1_000), Err(jtq_core::Error::Capacity { .. })));
}
