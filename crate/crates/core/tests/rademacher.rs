use diffnorm::symbols::random_family;
use diffnorm::{lp_norm, make_grid, rademacher_norm, square_function_norm, sup_partial, NormMode, SignDraw, TargetSpace, Weight};
use num_complex::Complex64;
use proptest::prelude::*;

/// (2^{−J} Σ_ε ‖Σ_j ε_j c_j g_j‖^p)^{1/p} over every sign pattern.
fn brute_force(family: &[diffnorm::SampledFunction], coeffs: &[f64], p: f64, w: &Weight) -> f64 {
    let terms = family.len();
    let mut total = 0.0;
    for pattern in 0..(1u32 << terms) {
        let mut acc = family[0].scaled(Complex64::new(0.0, 0.0));
        for (j, g) in family.iter().enumerate() {
            let sign = if pattern >> j & 1 == 0 { 1.0 } else { -1.0 };
            acc.axpy(Complex64::new(sign * coeffs[j], 0.0), g).unwrap();
        }
        total += lp_norm(&acc, p, w).unwrap().powf(p);
    }
    (total / (1u32 << terms) as f64).powf(1.0 / p)
}

fn family(seed: u64, size: usize) -> Vec<diffnorm::SampledFunction> {
    let g = make_grid(1, 128, 8.0).unwrap();
    random_family(&g, TargetSpace::Scalar, size, seed, 0).unwrap()
}

#[test]
fn exhaustive_mode_matches_brute_force() {
    let fam = family(1, 6);
    let coeffs = [1.0, 0.5, 2.0, -1.0, 0.25, 3.0];
    for p in [1.5, 3.0] {
        let w = Weight::power(0.4);
        let est = rademacher_norm(&fam, &coeffs, p, &w, 64, 0).unwrap();
        assert!(est.exhaustive);
        assert_eq!(est.std_error, 0.0);
        let want = brute_force(&fam, &coeffs, p, &w);
        assert!((est.value - want).abs() < 1e-12 * want);
    }
}

#[test]
fn exhaustive_at_two_is_square_function() {
    let fam = family(2, 8);
    let coeffs: Vec<f64> = (0..8).map(|j| 2f64.powi(j)).collect();
    let est = rademacher_norm(&fam, &coeffs, 2.0, &Weight::one(), 256, 0).unwrap();
    let sq = square_function_norm(&fam, &coeffs, 2.0, &Weight::one()).unwrap();
    assert!((est.value - sq).abs() < 1e-12 * sq);
}

#[test]
fn monte_carlo_is_seeded() {
    let fam = family(3, 24);
    let coeffs = vec![1.0; 24];
    let a = rademacher_norm(&fam, &coeffs, 3.0, &Weight::one(), 200, 9).unwrap();
    let b = rademacher_norm(&fam, &coeffs, 3.0, &Weight::one(), 200, 9).unwrap();
    assert!(!a.exhaustive);
    assert_eq!(a, b);
    let c = rademacher_norm(&fam, &coeffs, 3.0, &Weight::one(), 200, 10).unwrap();
    assert_ne!(a.value, c.value);
}

#[test]
fn sign_draws_are_reproducible() {
    let a = SignDraw::new(5, 17, 64);
    assert_eq!(a, SignDraw::new(5, 17, 64));
    assert!(a.signs.iter().all(|s| *s == 1.0 || *s == -1.0));
    let b = SignDraw::new(5, 18, 64);
    assert_ne!(a.signs, b.signs);
    // a longer draw extends a shorter one
    assert_eq!(SignDraw::new(5, 17, 80).signs[..64], a.signs[..]);
}

#[test]
fn khintchine_maurey_keeps_norms_comparable() {
    let fam = family(4, 10);
    let coeffs = vec![1.0; 10];
    for p in [1.5, 2.0, 4.0] {
        let r = rademacher_norm(&fam, &coeffs, p, &Weight::one(), 1024, 0).unwrap().value;
        let s = square_function_norm(&fam, &coeffs, p, &Weight::one()).unwrap();
        assert!(r / s > 0.1 && r / s < 10.0, "p={p}: {}", r / s);
    }
}

#[test]
fn sup_partial_curve_is_running_norm() {
    let fam = family(5, 5);
    let coeffs = [1.0, 1.0, 1.0, 1.0, 1.0];
    let sp = sup_partial(&fam, &coeffs, 2.0, &Weight::one(), NormMode::Square).unwrap();
    assert_eq!(sp.curve.len(), 5);
    for j in 1..=5 {
        let want = square_function_norm(&fam[..j], &coeffs[..j], 2.0, &Weight::one()).unwrap();
        assert!((sp.curve[j - 1] - want).abs() < 1e-12 * want);
    }
    let max = sp.curve.iter().cloned().fold(0.0, f64::max);
    assert_eq!(sp.sup, max);
    assert_eq!(sp.curve[sp.argmax - 1], max);
}

#[test]
fn shape_mismatch_is_reported() {
    let fam = family(6, 3);
    assert!(rademacher_norm(&fam, &[1.0, 2.0], 2.0, &Weight::one(), 8, 0).is_err());
    assert!(rademacher_norm(&fam, &[1.0, 2.0, 3.0], 2.0, &Weight::one(), 0, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn contraction_principle(seed in 0u64..500, a in proptest::collection::vec(-1.0f64..1.0, 7), p in 1.2f64..5.0) {
        let fam = family(seed, 7);
        let ones = vec![1.0; 7];
        let big = rademacher_norm(&fam, &ones, p, &Weight::one(), 64, 0).unwrap();
        let small = rademacher_norm(&fam, &a, p, &Weight::one(), 64, 0).unwrap();
        prop_assert!(big.exhaustive && small.exhaustive);
        prop_assert!(small.value <= big.value * (1.0 + 1e-12));
    }
}
