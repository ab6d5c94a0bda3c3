use diffnorm::{ap_characteristic_estimate, cube_mass, embedding_condition, inclusion_condition, Cube, Error, MRange, Verdict, Weight};
use proptest::prelude::*;

fn radii() -> Vec<f64> {
    (-8..=8).map(|k| 2f64.powi(k)).collect()
}

#[test]
fn constant_weights_have_unit_characteristic() {
    let mut cubes = Cube::origin_family(2, &radii());
    cubes.push(Cube::new(vec![3.0, -1.0], 0.25).unwrap());
    for p in [1.2, 2.0, 4.0] {
        assert_eq!(ap_characteristic_estimate(&Weight::constant(7.0).unwrap(), p, &cubes).unwrap().value, 1.0);
    }
}

#[test]
fn power_weight_on_origin_cubes() {
    // avg |x|^γ · (avg |x|^{−γ/(p−1)})^{p−1} on [−r, r]
    let cubes = Cube::origin_family(1, &radii());
    for (gamma, p) in [(0.5, 2.0), (-0.4, 2.0), (1.5, 3.0), (-0.3, 1.5)] {
        let k = -gamma / (p - 1.0);
        let want: f64 = (1.0 / (1.0 + gamma)) * (1.0f64 / (1.0 + k)).powf(p - 1.0);
        let got = ap_characteristic_estimate(&Weight::power(gamma), p, &cubes).unwrap().value;
        assert!((got - want).abs() < 1e-10, "gamma={gamma} p={p}: {got} vs {want}");
    }
}

#[test]
fn weights_outside_ap_are_flagged() {
    let cubes = Cube::origin_family(1, &radii());
    for (gamma, p) in [(-1.0, 2.0), (-1.5, 3.0), (1.0, 2.0), (2.5, 3.0)] {
        assert!(matches!(ap_characteristic_estimate(&Weight::power(gamma), p, &cubes), Err(Error::NonIntegrableWeight(_))));
    }
}

#[test]
fn cube_mass_closed_forms() {
    // ∫_{[c−r, c+r]} |x|^γ for a cube away from and across the origin
    let w = Weight::power(0.5);
    let q = Cube::new(vec![2.0], 1.0).unwrap();
    let want = (3f64.powf(1.5) - 1.0) / 1.5;
    assert!((cube_mass(&w, &q).unwrap() - want).abs() < 1e-12);
    let q = Cube::new(vec![0.5], 1.0).unwrap();
    let want = (1.5f64.powf(1.5) + 0.5f64.powf(1.5)) / 1.5;
    assert!((cube_mass(&w, &q).unwrap() - want).abs() < 1e-12);
    // v_{α,β}: |x|^α on |x| < 1, |x|^β beyond
    let v = Weight::vpow(-0.5, 0.5);
    let q = Cube::new(vec![0.0], 2.0).unwrap();
    let want = 2.0 * (2.0 + (2f64.powf(1.5) - 1.0) / 1.5);
    assert!((cube_mass(&v, &q).unwrap() - want).abs() < 1e-12);
}

#[test]
fn custom_weight_mass_converges() {
    let w = Weight::custom("quadratic", |x: &[f64]| 1.0 + x[0] * x[0]);
    let q = Cube::new(vec![1.0], 1.0).unwrap();
    assert!((cube_mass(&w, &q).unwrap() - (2.0 + 8.0 / 3.0)).abs() < 1e-9);
}

#[test]
fn weight_descriptors_parse() {
    for s in ["const:2", "power:0.5", "vpow:-0.5,0.5", "bar(0.3,2)power:0.5", "mod(0.3,2)vpow:0,0", "dilate(2)power:0.5"] {
        let w: Weight = s.parse().unwrap();
        assert_eq!(w.to_string().parse::<Weight>().unwrap().to_string(), w.to_string());
    }
    assert!("const:-1".parse::<Weight>().is_err());
    assert!("heavy:1".parse::<Weight>().is_err());
}

#[test]
fn inclusion_threshold_for_power_weights() {
    for (alpha, p) in [(0.0, 2.0), (0.5, 3.0), (-0.5, 1.5)] {
        let a = (1.0 + alpha) / p;
        let w = Weight::vpow(alpha, 0.0);
        let below = inclusion_condition(1, &w, 0.7 * a, p, 40, &MRange::boundary(0)).unwrap();
        assert_eq!(below.verdict, Verdict::Bounded);
        let lo = below.per_nu.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = below.per_nu.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo - 1.0 < 1e-9, "supremand should not depend on the level");
        let at = inclusion_condition(1, &w, a, p, 40, &MRange::boundary(0)).unwrap();
        assert_eq!(at.verdict, Verdict::Diverging);
        let above = inclusion_condition(1, &w, 1.1 * a, p, 40, &MRange::boundary(0)).unwrap();
        assert_eq!(above.verdict, Verdict::Diverging);
    }
}

#[test]
fn embedding_condition_for_unit_weight() {
    // equal unit weights and exponents: the supremand is 2^{−ν(s0−s1)} exactly
    let w = Weight::one();
    let r = embedding_condition(1, &w, 2.0, 0.7, &w, 2.0, 0.2, 30, &MRange::full(2)).unwrap();
    assert_eq!(r.verdict, Verdict::Bounded);
    for (nu, v) in r.per_nu.iter().enumerate() {
        assert!((v - (-(nu as f64) * 0.5).exp2()).abs() < 1e-12);
    }
    // a larger target exponent trades decay for cube volume
    let r = embedding_condition(1, &w, 2.0, 0.3, &w, 4.0, 0.2, 30, &MRange::full(2)).unwrap();
    assert_eq!(r.verdict, Verdict::Diverging);
    assert!(embedding_condition(1, &w, 2.0, 0.2, &w, 2.0, 0.3, 10, &MRange::full(1)).is_err());
}

#[test]
fn embedding_supremand_on_origin_cubes() {
    // w0 = |x|^α, w1 = |x|^{α−sp}, s0 − s1 = s: at m = 0 the p-th power of the supremand
    // is 2^{sp}(α+1)/(α−sp+1) on every level
    for (alpha, s, p) in [(0.0f64, 0.25f64, 2.0f64), (0.5, 0.3, 3.0), (-0.5, 0.1, 1.5)] {
        let w0 = Weight::power(alpha);
        let w1 = Weight::power(alpha - s * p);
        let r = embedding_condition(1, &w0, p, s, &w1, p, 0.0, 20, &MRange::boundary(0)).unwrap();
        let want = 2f64.powf(s * p) * (alpha + 1.0) / (alpha - s * p + 1.0);
        for v in &r.per_nu {
            assert!((v.powf(p) - want).abs() < 1e-10 * want, "{} vs {want}", v.powf(p));
        }
        assert_eq!(r.verdict, Verdict::Bounded);
    }
}

proptest! {
    #[test]
    fn characteristic_is_at_least_one(gamma in -0.9f64..0.9, p in 1.5f64..4.0, c in -4.0f64..4.0, h in 0.01f64..10.0) {
        prop_assume!(gamma < p - 1.0);
        let q = Cube::new(vec![c], h).unwrap();
        let v = ap_characteristic_estimate(&Weight::power(gamma), p, &[q]).unwrap().value;
        prop_assert!(v >= 1.0);
    }

    #[test]
    fn dilation_rescales_power_weight(gamma in -0.9f64..2.0, lambda in 0.1f64..10.0, c in -3.0f64..3.0, h in 0.1f64..3.0) {
        // w(λx) = λ^γ w(x) for w = |x|^γ
        let q = Cube::new(vec![c], h).unwrap();
        let base = cube_mass(&Weight::power(gamma), &q).unwrap();
        let dil = cube_mass(&Weight::power(gamma).dilated(lambda), &q).unwrap();
        prop_assert!((dil - lambda.powf(gamma) * base).abs() <= 1e-9 * dil.abs().max(1e-300));
    }
}
