use diffnorm::halfspace::{log_grid, threshold_grid, SWEEP_FACTORS};
use diffnorm::{
    boundary_mass, boundary_profile, continuous_profile_constant, halfspace_kernel_mean, halfspace_restrict, halfspace_sign_part,
    lp_norm, make_grid, multiplier_sweep, sample, HalfspaceExperiment, Kernel, TargetSpace, Verdict, Weight,
};
use num_complex::Complex64;

#[test]
fn restriction_is_an_idempotent_contraction() {
    let g = make_grid(1, 256, 16.0).unwrap();
    let f = sample(&g, &"shift(0.7)modgauss:0.5,2".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let r = halfspace_restrict(&f);
    assert_eq!(halfspace_restrict(&r).values(), r.values());
    for p in [1.5, 2.0, 4.0] {
        assert!(lp_norm(&r, p, &Weight::one()).unwrap() <= lp_norm(&f, p, &Weight::one()).unwrap());
    }
    let s = halfspace_sign_part(&f);
    for i in 0..g.len() {
        let x = g.point(i)[0];
        let want = if x > 0.0 { f.values()[i] } else { Complex64::new(0.0, 0.0) };
        assert_eq!(r.values()[i], want);
        if x != 0.0 {
            assert!(((f.values()[i] + s.values()[i]) * 0.5 - r.values()[i]).norm() < 1e-15);
        }
    }
}

#[test]
fn boundary_mass_of_indicator_is_linear() {
    // T(a) = (1 − a)/2 on [0, 1]
    for (y, t) in [(0.25, 1.0), (0.5, 2.0), (3.0, 1.0)] {
        let a: f64 = y / t;
        let want = 0.5 * (1.0 - a).max(0.0);
        assert!((boundary_mass(&Kernel::IndicatorCube, y, t, 1).unwrap() - want).abs() < 1e-15);
    }
    assert!(boundary_mass(&Kernel::gauss(), 0.0, 1.0, 1).is_err());
}

#[test]
fn halfspace_mean_against_direct_quadrature() {
    let g = make_grid(1, 512, 16.0).unwrap();
    let f = sample(&g, &"gauss:1".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let k = Kernel::Gauss { sigma: 0.5 };
    let t = 0.5;
    let got = halfspace_kernel_mean(&f, &k, t).unwrap();
    let exact = |x: f64| (-x * x).exp();
    for i in (0..g.len()).step_by(7) {
        let x = g.point(i)[0];
        if x <= 0.0 {
            assert_eq!(got.values()[i], Complex64::new(0.0, 0.0));
            continue;
        }
        // Simpson on [−x/t, 4], where K is below 1e-13 past the upper end
        let (lo, hi) = (-x / t, 4.0f64);
        let steps = 4000;
        let dh = (hi - lo) / steps as f64;
        let mut want = 0.0;
        for j in 0..=steps {
            let h = lo + j as f64 * dh;
            let w = if j == 0 || j == steps { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
            want += w * k.eval(&[h]) * (exact(x + t * h) - exact(x));
        }
        want *= dh / 3.0;
        assert!((got.values()[i].re - want).abs() < 1e-9, "x={x}: {} vs {want}", got.values()[i].re);
    }
}

#[test]
fn continuous_constant_closed_form() {
    // ∫_1^∞ τ^{−2s−3}(τ−1)² dτ = 1/(2s) − 2/(2s+1) + 1/(2s+2)
    for s in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let want = 1.0 / (2.0 * s) - 2.0 / (2.0 * s + 1.0) + 1.0 / (2.0 * s + 2.0);
        let got = continuous_profile_constant(s).unwrap();
        assert!((got - want).abs() < 1e-12 * want, "s={s}: {got} vs {want}");
    }
    assert!((continuous_profile_constant(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    assert!(continuous_profile_constant(1.0).is_err());
}

#[test]
fn boundary_profile_decays_like_power() {
    for k in [Kernel::gauss(), Kernel::IndicatorCube] {
        for s in [0.25, 0.5, 0.75] {
            let prof = boundary_profile(&k, s, 1, &log_grid(-4, 4, 8), None).unwrap();
            assert!((prof.slope + s).abs() < 1e-3, "{k} s={s}: {}", prof.slope);
            // g(2y) = 2^{−s} g(y) over whole octaves
            for i in 0..prof.g.len() - 8 {
                assert!((prof.g[i + 8] / prof.g[i] - 2f64.powf(-s)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn narrow_profile_range_is_rejected() {
    let r = boundary_profile(&Kernel::gauss(), 0.5, 1, &[1.0], Some((-2, 2)));
    assert!(matches!(r, Err(diffnorm::Error::QuadratureBudget(_))));
}

#[test]
fn threshold_grid_keeps_ap_points() {
    let pts = threshold_grid(&[-0.5, 0.0, 1.5], &[0.0, 0.5], &[2.0, 3.0], &SWEEP_FACTORS);
    assert!(!pts.is_empty());
    for &(a, b, p, s) in &pts {
        assert!(a > -1.0 && a < p - 1.0 && b > -1.0 && b < p - 1.0);
        assert!(s > 0.0 && s < 1.0);
        let c = s * p / (1.0 + a);
        assert!(SWEEP_FACTORS.iter().any(|f| (f - c).abs() < 1e-12));
    }
    // α = 1.5 is outside A_2 but inside A_3
    assert!(pts.iter().all(|&(a, _, p, _)| !(a == 1.5 && p == 2.0)));
    assert!(pts.iter().any(|&(a, _, p, _)| a == 1.5 && p == 3.0));
}

#[test]
fn small_sweep_separates_threshold() {
    for (s, want) in [(0.2, Verdict::Bounded), (0.6, Verdict::Diverging)] {
        let mut exp = HalfspaceExperiment::new(s, 2.0, Weight::one());
        exp.n0 = 256;
        exp.levels = 6;
        let sweep = multiplier_sweep(&exp).unwrap();
        assert_eq!(sweep.verdict, want, "s={s}: {:?}", sweep.members[0].sign_ratios);
        assert_eq!(sweep.inclusion, want);
        assert!(sweep.agreement);
    }
}

#[test]
fn sweep_needs_three_levels() {
    let mut exp = HalfspaceExperiment::new(0.2, 2.0, Weight::one());
    exp.levels = 2;
    assert!(multiplier_sweep(&exp).is_err());
}
