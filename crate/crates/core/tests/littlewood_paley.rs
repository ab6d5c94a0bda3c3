use diffnorm::{
    bessel_norm, bessel_potential, lp_block, lp_norm, make_grid, make_phi, randomized_lp_norm, sample, triebel_norm, Error,
    FunctionDesc, PhiSequence, SampledFunction, TargetSpace, Weight,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn corpus() -> Vec<FunctionDesc> {
    ["gauss:1", "modgauss:0.5,3", "bump:2,0", "randband:2,6,2", "dilate(2)gauss:1", "dilate(0.5)randband:1,4,2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

#[test]
fn bessel_of_mode_scales_by_symbol() {
    let g = make_grid(1, 64, 2.0 * std::f64::consts::PI).unwrap();
    let f = sample(&g, &"mode:5".parse().unwrap(), TargetSpace::Scalar).unwrap();
    for s in [-1.0, 0.5, 2.0] {
        let j = bessel_potential(&f, s).unwrap();
        let want = (1.0f64 + 25.0).powf(s / 2.0);
        for (a, b) in j.values().iter().zip(f.values()) {
            assert!((a - b * want).norm() < 1e-12);
        }
    }
}

#[test]
fn bessel_with_zero_smoothness_is_lp() {
    let g = make_grid(1, 256, 16.0).unwrap();
    let f = sample(&g, &"bump:2,1".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let w = Weight::vpow(0.5, -0.3);
    assert_eq!(bessel_norm(&f, 0.0, 2.5, &w).unwrap().value, lp_norm(&f, 2.5, &w).unwrap());
}

#[test]
fn bands_sum_to_identity() {
    let g = make_grid(1, 512, 32.0).unwrap();
    let phi = PhiSequence::default();
    let top = phi.admissible(g.nyquist()).unwrap();
    let f = sample(&g, &"modgauss:1,10".parse().unwrap(), TargetSpace::Scalar).unwrap();
    let mut sum = SampledFunction::zeros(g, TargetSpace::Scalar);
    for n in 0..=top {
        sum.axpy(Complex64::new(1.0, 0.0), &lp_block(&f, &phi, n).unwrap()).unwrap();
    }
    // the spectrum of f sits well below 2^top·B
    assert!(sum.max_abs_diff(&f) < 1e-10 * f.max_abs(), "{} {} {top}", sum.max_abs_diff(&f), f.max_abs());
}

#[test]
fn band_beyond_nyquist_is_rejected() {
    let g = make_grid(1, 64, 8.0).unwrap();
    let f = sample(&g, &FunctionDesc::gauss(), TargetSpace::Scalar).unwrap();
    let phi = make_phi(1.0, 1.5, 20).unwrap();
    assert!(matches!(lp_block(&f, &phi, 10), Err(Error::Nyquist(_))));
    assert!(make_phi(2.0, 1.0, 4).is_err());
}

#[test]
fn triebel_two_two_tracks_bessel() {
    let g = make_grid(1, 1024, 32.0).unwrap();
    let phi = PhiSequence::default();
    let mut ratios = vec![];
    for d in corpus() {
        let f = sample(&g, &d, TargetSpace::Scalar).unwrap();
        let t = triebel_norm(&f, 0.5, 2.0, 2.0, &Weight::one(), &phi).unwrap().value;
        ratios.push(t / bessel_norm(&f, 0.5, 2.0, &Weight::one()).unwrap().value);
    }
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo < 4.0, "{ratios:?}");
}

#[test]
fn triebel_q_chain() {
    let g = make_grid(1, 1024, 32.0).unwrap();
    let phi = PhiSequence::default();
    let w = Weight::power(0.5);
    for d in corpus() {
        let f = sample(&g, &d, TargetSpace::Scalar).unwrap();
        let one = triebel_norm(&f, 0.5, 2.0, 1.0, &w, &phi).unwrap().value;
        let two = triebel_norm(&f, 0.5, 2.0, 2.0, &w, &phi).unwrap().value;
        let inf = triebel_norm(&f, 0.5, 2.0, f64::INFINITY, &w, &phi).unwrap().value;
        assert!(one >= two && two >= inf);
    }
}

#[test]
fn randomized_lp_is_equivalent_to_bessel() {
    let g = make_grid(1, 1024, 32.0).unwrap();
    let phi = PhiSequence::default();
    for d in corpus() {
        let f = sample(&g, &d, TargetSpace::Scalar).unwrap();
        let r = randomized_lp_norm(&f, 0.5, 3.0, &Weight::one(), &phi, 16, 512, 1).unwrap();
        let b = bessel_norm(&f, 0.5, 3.0, &Weight::one()).unwrap().value;
        assert!(r.value / b > 0.2 && r.value / b < 5.0, "{d}: {}", r.value / b);
        assert_eq!(r.curve.len(), phi.admissible(g.nyquist()).unwrap() + 1);
    }
}

#[test]
fn invalid_exponent_is_rejected() {
    let g = make_grid(1, 64, 8.0).unwrap();
    let f = sample(&g, &FunctionDesc::gauss(), TargetSpace::Scalar).unwrap();
    assert!(matches!(bessel_norm(&f, 0.5, 1.0, &Weight::one()), Err(Error::InvalidParameter(_))));
}

proptest! {
    #[test]
    fn bessel_potentials_compose(s in -2.0f64..2.0, t in -2.0f64..2.0, seed in 0u64..100) {
        let g = make_grid(1, 256, 16.0).unwrap();
        let f = sample(&g, &FunctionDesc::RandBand { seed, band: 5.0, width: 2.0 }, TargetSpace::Scalar).unwrap();
        let a = bessel_potential(&bessel_potential(&f, s).unwrap(), t).unwrap();
        let b = bessel_potential(&f, s + t).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-10 * b.max_abs());
    }

    #[test]
    fn bessel_norm_increases_with_smoothness(s in 0.0f64..1.5, ds in 0.01f64..1.0, seed in 0u64..100) {
        let g = make_grid(1, 256, 16.0).unwrap();
        let f = sample(&g, &FunctionDesc::RandBand { seed, band: 5.0, width: 2.0 }, TargetSpace::Scalar).unwrap();
        let lo = bessel_norm(&f, s, 2.0, &Weight::one()).unwrap().value;
        let hi = bessel_norm(&f, s + ds, 2.0, &Weight::one()).unwrap().value;
        prop_assert!(hi >= lo);
    }
}
