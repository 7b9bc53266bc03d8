mod common;

use census_core::chaos::{
    gen_cauchy_schwarz_check, khintchine_reference, moment_combinatorial, moment_direct, norm_p,
    rademacher_sum_moment, t1_upper_check, uniform_probe, zlm_lower_chain, ChaosCoefficients,
    VariableCovering,
};
use census_core::enumerate::{mu, DegreeMode, Filter};
use census_core::random;
use census_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    q(n, 1)
}

/// Plain average of `f^p` over every sign vector, term by term.
fn naive_moment(b: &ChaosCoefficients, p: u32) -> BigRational {
    let n = b.n();
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for signs in 0u64..(1 << n) {
        let mut f = BigRational::from_integer(BigInt::from(0));
        for (set, v) in b.terms() {
            let neg = set.iter().filter(|&&e| signs >> (e - 1) & 1 == 1).count() % 2 == 1;
            if neg {
                f -= v;
            } else {
                f += v;
            }
        }
        sum += num_traits::pow(f, p as usize);
    }
    sum / BigRational::from_integer(BigInt::from(1u64 << n))
}

#[test]
fn fast_direct_route_matches_naive_average() {
    let mut r = rng(2);
    for _ in 0..60 {
        let l = if rand::Rng::gen_bool(&mut r, 0.5) { 2 } else { 3 };
        let b = random::random_coefficients(&mut r, l, 6, 5).unwrap();
        for p in 1..=5 {
            assert_eq!(moment_direct(&b, p).unwrap(), naive_moment(&b, p));
        }
    }
}

#[test]
fn uniform_quadratic_fourth_moments() {
    // E f^4 for b uniform on the pairs of {1..m}
    let want = [21i64, 168, 640, 1725, 3801, 7336];
    for (k, w) in want.iter().enumerate() {
        let b = ChaosCoefficients::uniform(2, 3 + k as u32).unwrap();
        assert_eq!(moment_direct(&b, 4).unwrap(), int(*w));
        assert_eq!(moment_combinatorial(&b, 4).unwrap(), int(*w));
    }
}

#[test]
fn two_routes_agree_on_seeded_instances() {
    let mut r = rng(4);
    for _ in 0..200 {
        let l = if rand::Rng::gen_bool(&mut r, 0.5) { 2 } else { 3 };
        let b = random::random_coefficients(&mut r, l, 5, 4).unwrap();
        for p in [2u32, 4, 6] {
            assert_eq!(moment_combinatorial(&b, p).unwrap(), moment_direct(&b, p).unwrap());
        }
    }
}

#[test]
fn second_moment_is_squared_norm() {
    let mut r = rng(6);
    for _ in 0..100 {
        let b = random::random_coefficients(&mut r, 3, 7, 9).unwrap();
        assert_eq!(moment_direct(&b, 2).unwrap(), b.norm_sq());
        let n2 = norm_p(&b, 2.0).unwrap();
        let want = census_core::math::rational_to_f64(&b.norm_sq()).sqrt();
        assert!((n2 - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn moments_are_homogeneous_and_even_ones_nonnegative() {
    let mut r = rng(10);
    for _ in 0..50 {
        let b = random::random_coefficients(&mut r, 2, 6, 5).unwrap();
        let lambda = q(-3, 2);
        let scaled = b.scaled(&lambda);
        for p in 1..=6u32 {
            let m = moment_direct(&b, p).unwrap();
            assert_eq!(moment_direct(&scaled, p).unwrap(), m.clone() * num_traits::pow(lambda.clone(), p as usize));
            if p % 2 == 0 {
                assert!(m >= int(0));
            }
        }
    }
}

#[test]
fn single_term_moments() {
    let b = ChaosCoefficients::new(3, [(vec![2, 4, 9], q(5, 3))]).unwrap();
    for p in [2u32, 4, 6, 8] {
        assert_eq!(moment_combinatorial(&b, p).unwrap(), num_traits::pow(q(5, 3), p as usize));
    }
    assert_eq!(moment_combinatorial(&b, 5), Err(Error::OddExponent(5)));
    let u = ChaosCoefficients::uniform(2, 3).unwrap();
    let n4 = norm_p(&u, 4.0).unwrap();
    assert!((n4 - 21f64.powf(0.25)).abs() < 1e-12);
}

#[test]
fn upper_bound_with_enumerated_counts() {
    let mut r = rng(12);
    for l in [2u32, 3] {
        let mu_full = mu(4, DegreeMode::Exact(l), Filter::Full).unwrap();
        for _ in 0..30 {
            let b = random::random_coefficients(&mut r, l as usize, 6, 7).unwrap();
            assert!(t1_upper_check(&b, 4, &mu_full).unwrap().holds);
        }
    }
}

#[test]
fn lower_chain_cells() {
    let cases = [(2u32, 2u32, 4u32, int(6), int(1)), (2, 4, 6, int(1725), int(15)), (3, 2, 6, int(20), q(10, 3))];
    for (l, p, m, lhs, rhs) in cases {
        let mu_std = mu(p, DegreeMode::Exact(l), Filter::Standard).unwrap();
        let chain = zlm_lower_chain(l, p, m, &mu_std).unwrap();
        assert_eq!(chain.lhs, lhs);
        assert_eq!(chain.rhs, rhs);
        assert!(chain.holds);
    }
}

#[test]
fn uniform_ratios_increase_with_m() {
    let probes: Vec<_> = (4..=10).map(|m| uniform_probe(2, 4, m).unwrap()).collect();
    assert!(probes.windows(2).all(|w| w[0].ratio_pow <= w[1].ratio_pow));
}

#[test]
fn rademacher_sum_moments_closed_forms() {
    for n in 1..=40u64 {
        let n_ = n as i64;
        assert_eq!(rademacher_sum_moment(n, 2), int(n_));
        assert_eq!(rademacher_sum_moment(n, 4), int(3 * n_ * n_ - 2 * n_));
        assert_eq!(rademacher_sum_moment(n, 6), int(15 * n_.pow(3) - 30 * n_ * n_ + 16 * n_));
    }
    let r = khintchine_reference(6, 1000).unwrap();
    assert!(r.within_double_factorial && r.within_stechkin);
    assert!(r.relative_to_limit > 0.98);
}

#[test]
fn khintchine_fourth_moment_sequence() {
    let mut prev = int(0);
    for n in 1..=50u64 {
        let r = khintchine_reference(4, n).unwrap();
        assert_eq!(r.value, int(3) - q(2, n as i64));
        assert!(r.value >= prev);
        prev = r.value;
    }
}

#[test]
fn generalized_cauchy_schwarz_on_random_coverings() {
    let mut r = rng(14);
    for _ in 0..1000 {
        let v = random::random_variable_covering(&mut r, 5).unwrap();
        assert!(gen_cauchy_schwarz_check(&v).unwrap().holds);
    }
}

#[test]
fn generalized_cauchy_schwarz_with_quadruple_variable() {
    let sets = vec![vec![1], vec![1], vec![1], vec![1]];
    let seqs = vec![
        vec![int(1), int(3)],
        vec![int(2), int(1)],
        vec![q(1, 2), int(4)],
        vec![int(5), int(1)],
    ];
    let v = VariableCovering::new(sets, 2, seqs).unwrap();
    let c = gen_cauchy_schwarz_check(&v).unwrap();
    assert!(c.holds);
    assert!(VariableCovering::new(vec![vec![1], vec![1], vec![1]], 1, vec![vec![int(1)]; 3]).is_err());
    assert!(c.lhs > BigInt::from(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routes_agree(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 4, 6])) {
        let mut r = rng(seed);
        let b = random::random_coefficients(&mut r, 2, 5, 6).unwrap();
        prop_assert_eq!(moment_combinatorial(&b, p).unwrap(), moment_direct(&b, p).unwrap());
    }
}
