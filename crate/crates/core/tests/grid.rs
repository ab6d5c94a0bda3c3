use diffnorm::functions::FunctionDesc;
use diffnorm::symbols::random_family;
use diffnorm::{forward, inverse, lp_norm, make_grid, sample, Error, SampledFunction, TargetSpace, Weight};
use num_complex::Complex64;
use proptest::prelude::*;

/// h^d Σ_x f(x) e^{−ix·ξ_k}, summed directly.
fn direct_transform(f: &SampledFunction) -> Vec<Complex64> {
    let g = f.grid();
    (0..g.len())
        .map(|k| {
            let xi = g.frequency(k);
            (0..g.len())
                .map(|i| {
                    let x = g.point(i);
                    f.values()[i] * Complex64::from_polar(g.cell_volume(), -(x[0] * xi[0] + x[1] * xi[1]))
                })
                .sum()
        })
        .collect()
}

#[test]
fn grid_rejects_bad_shapes() {
    assert!(matches!(make_grid(3, 64, 1.0), Err(Error::InvalidGrid(_))));
    assert!(matches!(make_grid(1, 48, 1.0), Err(Error::InvalidGrid(_))));
    assert!(make_grid(1, 64, -1.0).is_err());
    assert!(make_grid(2, 32, 4.0).is_ok());
}

#[test]
fn forward_matches_direct_sum() {
    for (d, n) in [(1, 64), (2, 16)] {
        let g = make_grid(d, n, 8.0).unwrap();
        let f = sample(&g, &"modgauss:0.7,2".parse().unwrap(), TargetSpace::Scalar).unwrap();
        let fast = forward(&f);
        let slow = direct_transform(&f);
        let err = fast.coefficients().iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "d={d}: {err}");
    }
}

#[test]
fn gaussian_transform_is_analytic() {
    // ∫ e^{−x²} e^{−ixξ} dx = √π e^{−ξ²/4}
    let g = make_grid(1, 256, 16.0).unwrap();
    let f = sample(&g, &FunctionDesc::gauss(), TargetSpace::Scalar).unwrap();
    let spec = forward(&f);
    for k in 0..g.len() {
        let xi = g.freq(k);
        let want = std::f64::consts::PI.sqrt() * (-xi * xi / 4.0).exp();
        assert!((spec.coefficients()[k].re - want).abs() < 1e-12, "xi={xi}");
    }
}

#[test]
fn mode_has_single_coefficient() {
    let g = make_grid(2, 16, 2.0).unwrap();
    let f = sample(&g, &"mode:3,-2".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let spec = forward(&f);
    let hit = g.freq_slot(3) * 16 + g.freq_slot(-2);
    for (k, c) in spec.coefficients().iter().enumerate() {
        let want = if k == hit { 4.0 } else { 0.0 };
        assert!((c.norm() - want).abs() < 1e-12);
    }
}

#[test]
fn csv_round_trip() {
    let g = make_grid(1, 32, 4.0).unwrap();
    let space = TargetSpace::sequence(2.0, 2).unwrap();
    let f = sample(&g, &"vec[gauss;bump:1,0.5]".parse().unwrap(), space).unwrap();
    let mut buf = Vec::new();
    f.write_csv(&mut buf).unwrap();
    let back = SampledFunction::read_csv(&buf[..]).unwrap();
    assert_eq!(back.grid(), f.grid());
    assert!(back.max_abs_diff(&f) < 1e-15);
}

#[test]
fn vector_descriptor_checks_components() {
    let g = make_grid(1, 32, 4.0).unwrap();
    let space = TargetSpace::sequence(2.0, 3).unwrap();
    assert!(matches!(sample(&g, &"vec[gauss;gauss]".parse().unwrap(), space), Err(Error::ShapeMismatch(_))));
}

#[test]
fn descriptor_display_parses_back() {
    for s in ["gauss:2", "modgauss:0.5,3", "bump:2,0", "randband:4,6,2", "dilate(0.5)shift(1)gauss:1", "vec[gauss:1;mode:1,0]"] {
        let d: FunctionDesc = s.parse().unwrap();
        assert_eq!(d.to_string().parse::<FunctionDesc>().unwrap(), d);
    }
    assert!("wobble:1".parse::<FunctionDesc>().is_err());
}

#[test]
fn lp_norm_of_constant_matches_volume() {
    let g = make_grid(2, 32, 4.0).unwrap();
    let f = SampledFunction::from_fn(g, TargetSpace::Scalar, |_, _| Complex64::new(3.0, 0.0));
    let v = lp_norm(&f, 3.0, &Weight::one()).unwrap();
    assert!((v - 3.0 * 16f64.powf(1.0 / 3.0)).abs() < 1e-12);
}

#[test]
fn sequence_norm_is_pointwise_lq() {
    let g = make_grid(1, 16, 2.0).unwrap();
    let space = TargetSpace::sequence(1.0, 2).unwrap();
    let f = SampledFunction::from_fn(g, space, |_, c| Complex64::new(if c == 0 { 3.0 } else { -4.0 }, 0.0));
    assert!(f.pointwise_norms().iter().all(|v| (v - 7.0).abs() < 1e-15));
}

proptest! {
    #[test]
    fn round_trip_is_identity(seed in 0u64..1000, d in 1usize..=2) {
        let g = make_grid(d, if d == 1 { 128 } else { 32 }, 10.0).unwrap();
        let f = random_family(&g, TargetSpace::Scalar, 1, seed, 0).unwrap().remove(0);
        let back = inverse(&forward(&f));
        prop_assert!(back.max_abs_diff(&f) <= 1e-12 * f.max_abs());
    }

    #[test]
    fn parseval_holds(seed in 0u64..1000) {
        let g = make_grid(1, 128, 6.0).unwrap();
        let f = random_family(&g, TargetSpace::Scalar, 1, seed, 3).unwrap().remove(0);
        let spec = forward(&f);
        let lhs = lp_norm(&f, 2.0, &Weight::one()).unwrap().powi(2);
        let rhs = spec.parseval_constant() * spec.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn lp_norm_is_a_norm(seed in 0u64..1000, p in 1.1f64..6.0, c in -5.0f64..5.0) {
        let g = make_grid(1, 64, 4.0).unwrap();
        let fs = random_family(&g, TargetSpace::Scalar, 2, seed, 1).unwrap();
        let w = Weight::power(0.3);
        let a = lp_norm(&fs[0], p, &w).unwrap();
        let b = lp_norm(&fs[1], p, &w).unwrap();
        let mut sum = fs[0].clone();
        sum.axpy(Complex64::new(1.0, 0.0), &fs[1]).unwrap();
        prop_assert!(lp_norm(&sum, p, &w).unwrap() <= (a + b) * (1.0 + 1e-12));
        let scaled = lp_norm(&fs[0].scaled(Complex64::new(c, 0.0)), p, &w).unwrap();
        prop_assert!((scaled - c.abs() * a).abs() <= 1e-12 * a.max(1.0));
    }
}
