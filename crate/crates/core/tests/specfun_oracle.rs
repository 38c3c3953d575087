//! Special functions against exact rational sums and textbook recurrences.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kratzer::specfun::{hyp1f1_terminating, hyp2f1_terminating, jacobi, laguerre};

fn close(got: f64, expected: f64, scale: f64, tol: f64) -> bool {
    (got - expected).abs() <= tol * scale.max(f64::MIN_POSITIVE)
}

#[test]
fn hyp1f1_fixed_case() {
    // 1 - 3(0.7)/1.5 + 3(0.49)/(1.5 * 2.5) - 0.343/(1.5 * 2.5 * 3.5 * 1)
    let by_hand = 1.0 - 2.1 / 1.5 + 1.47 / 3.75 - 0.343 / 13.125;
    let exact = common::exact_hyp1f1(3, 1.5, 0.7);
    assert!((exact - by_hand).abs() < 1e-15);
    assert!((hyp1f1_terminating(3, 1.5, 0.7).unwrap() - exact).abs() < 1e-15);
}

#[test]
fn hyp2f1_fixed_case() {
    // 2F1(-2, 5; 2; 1/2) = 1 - 2*5/2 * 0.5 + (2*5*6)/(2*3*2) * 0.25
    let by_hand = 1.0 - 2.5 + 1.25;
    let exact = common::exact_hyp2f1(2, 3.0, 2.0, 0.5);
    assert!((exact - by_hand).abs() < 1e-15);
    assert!((hyp2f1_terminating(2, 3.0, 2.0, 0.5).unwrap() - exact).abs() < 1e-15);
}

#[test]
fn hyp1f1_pole_is_an_error() {
    assert!(hyp1f1_terminating(3, -1.0, 0.5).is_err());
    assert!(hyp2f1_terminating(3, 1.0, -2.0, 0.5).is_err());
}

#[test]
fn low_degree_closed_forms() {
    for &(nu, x) in &[(0.0, 0.3), (1.5, 2.0), (4.25, 7.5)] {
        assert_eq!(laguerre(0, nu, x), 1.0);
        assert!((laguerre(1, nu, x) - (1.0 + nu - x)).abs() < 1e-14);
    }
    for &(p, q, x) in &[(0.0, 0.0, 0.3), (1.5, 0.5, -0.8), (3.0, 2.0, 0.9)] {
        assert_eq!(jacobi(0, p, q, x), 1.0);
        let p1 = 0.5 * (p - q) + 0.5 * (p + q + 2.0) * x;
        assert!((jacobi(1, p, q, x) - p1).abs() < 1e-14);
    }
    // Legendre P_3
    let x: f64 = 0.37;
    assert!((jacobi(3, 0.0, 0.0, x) - 0.5 * (5.0 * x.powi(3) - 3.0 * x)).abs() < 1e-15);
}

#[test]
fn seeded_sweep_against_exact_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let n = rand::Rng::gen_range(&mut rng, 0..=7u32);
        let c = common::dyadic(&mut rng, 0.5, 6.0);
        let z = common::dyadic(&mut rng, 0.0, 4.0);
        let got = hyp1f1_terminating(n, c, z).unwrap();
        let exact = common::exact_hyp1f1(n, c, z);
        assert!(
            close(got, exact, exact.abs().max(1.0), 1e-12),
            "1F1(-{n}; {c}; {z})"
        );

        let rho = common::dyadic(&mut rng, 0.5, 6.0);
        let sigma = common::dyadic(&mut rng, 0.5, 6.0);
        let z = common::dyadic(&mut rng, 0.0, 1.0);
        let got = hyp2f1_terminating(n, rho, sigma, z).unwrap();
        let exact = common::exact_hyp2f1(n, rho, sigma, z);
        assert!(
            close(got, exact, exact.abs().max(1.0), 1e-11),
            "2F1(-{n}, {rho}+{n}; {sigma}; {z})"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laguerre_agrees_with_exact_and_recurrence(n in 0u32..9, nu_k in 0i64..5120, x_k in 0i64..6144) {
        let (nu, x) = (nu_k as f64 / 1024.0, x_k as f64 / 1024.0);
        let got = laguerre(n, nu, x);
        let scale = common::laguerre_scale(n, nu, x);
        prop_assert!(close(got, common::exact_laguerre(n, nu, x), scale, 1e-13));
        prop_assert!(close(got, common::laguerre_recurrence(n, nu, x), scale, 1e-12));
    }

    #[test]
    fn jacobi_agrees_with_exact_and_recurrence(
        n in 0u32..9,
        p_k in 0i64..5120,
        q_k in 0i64..5120,
        x_k in -1024i64..1024,
    ) {
        let (p, q, x) = (p_k as f64 / 1024.0, q_k as f64 / 1024.0, x_k as f64 / 1024.0);
        let got = jacobi(n, p, q, x);
        let scale = common::jacobi_scale(n, p, q, x);
        prop_assert!(close(got, common::exact_jacobi(n, p, q, x), scale, 1e-13));
        prop_assert!(close(got, common::jacobi_recurrence(n, p, q, x), scale, 1e-12));
    }
}
