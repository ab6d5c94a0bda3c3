use diffnorm::{
    averaging, difference, difference_seminorm, kdelta_symbol, kernel_mean, level_plan, make_grid, sample, strichartz_norm,
    translate, Error, FunctionDesc, Kernel, Levels, MeanMode, NormMode, SampledFunction, SeminormRequest, TLevels,
    TargetSpace, Weight,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn mode_grid() -> diffnorm::GridSpec {
    make_grid(1, 64, 2.0 * std::f64::consts::PI).unwrap()
}

#[test]
fn difference_of_mode_is_closed_form() {
    let g = mode_grid();
    let f = sample(&g, &"mode:3".parse().unwrap(), TargetSpace::Scalar).unwrap();
    for (m, h) in [(1, 0.3), (2, 0.3), (3, -1.1)] {
        let got = difference(&f, m, [h, 0.0]).unwrap();
        let factor = (Complex64::from_polar(1.0, 3.0 * h) - 1.0).powu(m as u32);
        for (a, b) in got.values().iter().zip(f.values()) {
            assert!((a - b * factor).norm() < 1e-12, "m={m}");
        }
    }
}

#[test]
fn difference_matches_shifted_samples() {
    // Δ²_h f(x) = f(x+2h) − 2f(x+h) + f(x) with h a whole number of cells
    let g = make_grid(1, 128, 16.0).unwrap();
    let f = sample(&g, &"randband:5,3,1".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let h = 3.0 * g.spacing();
    let got = difference(&f, 2, [h, 0.0]).unwrap();
    let v = f.values();
    let n = v.len();
    for i in 0..n {
        let want = v[(i + 6) % n] - v[(i + 3) % n] * 2.0 + v[i];
        assert!((got.values()[i] - want).norm() < 1e-12);
    }
}

#[test]
fn translation_by_one_cell_rotates_samples() {
    let g = make_grid(2, 16, 4.0).unwrap();
    let f = sample(&g, &"bump:1.5,0.3".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let got = translate(&f, [0.0, g.spacing()]).unwrap();
    for i in 0..16 {
        for j in 0..16 {
            let want = f.values()[i * 16 + (j + 1) % 16];
            assert!((got.values()[i * 16 + j] - want).norm() < 1e-12);
        }
    }
}

#[test]
fn averaging_mode_gives_sinc() {
    let g = mode_grid();
    let f = sample(&g, &"mode:4".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let r = 0.7;
    let got = averaging(&f, r).unwrap();
    let factor = (4.0 * r as f64).sin() / (4.0 * r);
    for (a, b) in got.values().iter().zip(f.values()) {
        assert!((a - b * factor).norm() < 1e-12);
    }
    assert!(averaging(&f, 0.0).is_err());
}

#[test]
fn kernel_means_annihilate_constants() {
    let g = make_grid(1, 64, 8.0).unwrap();
    let f = SampledFunction::from_fn(g, TargetSpace::Scalar, |_, _| Complex64::new(2.5, 0.0));
    for k in [Kernel::gauss(), Kernel::IndicatorCube, Kernel::Plateau] {
        for m in 1..=3 {
            assert!(kdelta_symbol(&k, 1, m, 0.5).unwrap().eval(&[0.0]).norm() < 1e-14);
            let mean = kernel_mean(&f, &k, m, 0.5, MeanMode::Spectral).unwrap();
            assert!(mean.max_abs() < 1e-12, "{k} m={m}");
        }
    }
}

#[test]
fn kernel_mean_of_mode_against_quadrature() {
    // ∫ K(h) Δ_{th} e^{ikx} dh = e^{ikx} ∫ K(h)(e^{ikth} − 1) dh, integrated directly
    let g = mode_grid();
    let f = sample(&g, &"mode:2".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let t = 0.8;
    let k = Kernel::Gauss { sigma: 0.5 };
    let steps = 20000;
    let (lo, hi) = (-5.0, 5.0);
    let dh = (hi - lo) / steps as f64;
    let mut want = Complex64::new(0.0, 0.0);
    for i in 0..=steps {
        let h = lo + i as f64 * dh;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        want += (Complex64::from_polar(1.0, 2.0 * t * h) - 1.0) * (w * dh * k.eval(&[h]));
    }
    let got = kernel_mean(&f, &k, 1, t, MeanMode::Spectral).unwrap();
    for (a, b) in got.values().iter().zip(f.values()) {
        assert!((a - b * want).norm() < 1e-10);
    }
}

#[test]
fn spectral_and_spatial_means_agree() {
    let g = make_grid(1, 256, 16.0).unwrap();
    let f = sample(&g, &"modgauss:1,2".parse().unwrap(), TargetSpace::Scalar).unwrap();
    for k in [Kernel::gauss(), Kernel::IndicatorCube, Kernel::Plateau] {
        for (m, t) in [(1, 0.5), (2, 0.25)] {
            let a = kernel_mean(&f, &k, m, t, MeanMode::Spectral).unwrap();
            let b = kernel_mean(&f, &k, m, t, MeanMode::Spatial).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-8 * f.max_abs(), "{k} m={m}: {}", a.max_abs_diff(&b));
        }
    }
}

#[test]
fn level_plan_respects_nyquist() {
    let g = make_grid(1, 64, 8.0).unwrap();
    // Nyquist π·64/8 ≈ 25.1, so j ≤ 4
    let (used, excluded) = level_plan(&g, &Kernel::gauss(), 1, Levels::Natural { j_max: 8 });
    assert_eq!(used, vec![1, 2, 3, 4]);
    assert_eq!(excluded, vec![5, 6, 7, 8]);
    // j < 0 needs m·2^{|j|}·4σ ≤ L/2 = 4
    let (used, _) = level_plan(&g, &Kernel::gauss(), 1, Levels::Integer { j_max: 3 });
    assert!(used.contains(&0) && !used.contains(&-1));
}

#[test]
fn integer_levels_dominate_natural_levels() {
    let g = make_grid(1, 512, 64.0).unwrap();
    let f = sample(&g, &"bump:2,0".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let mut req = SeminormRequest::new(0.5, 2.0, 1, Weight::one(), Kernel::gauss());
    req.levels = Levels::Natural { j_max: 3 };
    let nat = difference_seminorm(&f, &req).unwrap().value;
    req.levels = Levels::Integer { j_max: 3 };
    let int = difference_seminorm(&f, &req).unwrap().value;
    assert!(int >= nat && nat > 0.0);
}

#[test]
fn square_and_exhaustive_rademacher_agree_at_two() {
    let g = make_grid(1, 256, 32.0).unwrap();
    let f = sample(&g, &"gauss:1".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let mut req = SeminormRequest::new(0.5, 2.0, 1, Weight::one(), Kernel::gauss());
    req.levels = Levels::Natural { j_max: 4 };
    let sq = difference_seminorm(&f, &req).unwrap().value;
    req.estimator = NormMode::Rademacher { trials: 64, seed: 3 };
    let rad = difference_seminorm(&f, &req).unwrap().value;
    assert!((sq - rad).abs() < 1e-10 * sq);
}

#[test]
fn seminorm_rejects_bad_parameters() {
    let g = make_grid(1, 64, 8.0).unwrap();
    let f = sample(&g, &FunctionDesc::gauss(), TargetSpace::Scalar).unwrap();
    let req = SeminormRequest::new(0.0, 2.0, 1, Weight::one(), Kernel::gauss());
    assert!(matches!(difference_seminorm(&f, &req), Err(Error::InvalidParameter(_))));
    let req = SeminormRequest::new(0.5, 2.0, 0, Weight::one(), Kernel::gauss());
    assert!(difference_seminorm(&f, &req).is_err());
}

#[test]
fn strichartz_guards() {
    let g = make_grid(1, 128, 16.0).unwrap();
    let f = sample(&g, &FunctionDesc::gauss(), TargetSpace::Scalar).unwrap();
    // t_max = 2^3 = 8 > L/4
    let r = strichartz_norm(&f, 0.5, 2.0, &Weight::one(), TLevels { j_lo: -3, j_hi: 6 });
    assert!(matches!(r, Err(Error::QuadratureBudget(_))));
    assert!(strichartz_norm(&f, 1.0, 2.0, &Weight::one(), TLevels::for_grid(&g)).is_err());
    let v = strichartz_norm(&f, 0.5, 2.0, &Weight::one(), TLevels::for_grid(&g)).unwrap().value;
    assert!(v.is_finite() && v > 0.0);
}

proptest! {
    #[test]
    fn first_difference_is_translation_minus_identity(h in -2.0f64..2.0, seed in 0u64..100) {
        let g = make_grid(1, 128, 16.0).unwrap();
        let f = sample(&g, &FunctionDesc::RandBand { seed, band: 2.0, width: 1.0 }, TargetSpace::Scalar).unwrap();
        let mut want = translate(&f, [h, 0.0]).unwrap();
        want.axpy(Complex64::new(-1.0, 0.0), &f).unwrap();
        prop_assert!(difference(&f, 1, [h, 0.0]).unwrap().max_abs_diff(&want) <= 1e-12 * f.max_abs());
    }

    #[test]
    fn higher_differences_compose(h in -1.0f64..1.0, m in 1usize..4) {
        let g = make_grid(1, 128, 16.0).unwrap();
        let f = sample(&g, &"modgauss:1,1".parse().unwrap(), TargetSpace::Scalar).unwrap();
        let once = difference(&difference(&f, m, [h, 0.0]).unwrap(), 1, [h, 0.0]).unwrap();
        let direct = difference(&f, m + 1, [h, 0.0]).unwrap();
        prop_assert!(once.max_abs_diff(&direct) <= 1e-11 * f.max_abs());
    }
}
