use diffnorm::{Kernel, SampledProfile};

/// Composite midpoint rule on [lo, hi], split where the built-in profiles jump or kink.
fn integrate(lo: f64, hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut cuts = vec![lo];
    cuts.extend([-2.0, -1.0, 1.0, 2.0].iter().filter(|&&c| c > lo && c < hi));
    cuts.push(hi);
    let steps = 40_000;
    cuts.windows(2)
        .map(|w| {
            let dh = (w[1] - w[0]) / steps as f64;
            (0..steps).map(|i| g(w[0] + (i as f64 + 0.5) * dh)).sum::<f64>() * dh
        })
        .sum()
}

/// ∫ K(h) e^{−ihξ} dh over [−R, R].
fn direct_transform(k: &Kernel, xi: f64, r: f64) -> (f64, f64) {
    let re = integrate(-r, r, |h| k.eval(&[h]) * (h * xi).cos());
    let im = integrate(-r, r, |h| -k.eval(&[h]) * (h * xi).sin());
    (re, im)
}

fn kernels() -> Vec<Kernel> {
    vec![
        Kernel::gauss(),
        Kernel::Gauss { sigma: 0.5 },
        Kernel::ModGauss { sigma: 1.0, omega: 2.0 },
        Kernel::IndicatorCube,
        Kernel::Plateau,
    ]
}

#[test]
fn transforms_match_quadrature() {
    for k in kernels() {
        let t = k.transform();
        for xi in [0.0, 0.5, 1.7, 4.0] {
            let (re, im) = direct_transform(&k, xi, 10.0);
            let got = t.eval(&[xi]);
            assert!((got.re - re).abs() < 1e-8 && (got.im - im).abs() < 1e-8, "{k} at {xi}: {got} vs {re}");
        }
    }
}

#[test]
fn masses_are_transform_at_zero() {
    for k in kernels() {
        for d in [1, 2] {
            let at_zero = k.transform().eval(&[0.0, 0.0][..d]).re;
            assert!((k.mass(d) - at_zero).abs() < 1e-9, "{k} d={d}");
        }
    }
    assert_eq!(Kernel::Plateau.mass(1), 3.0);
}

#[test]
fn lower_tail_matches_quadrature() {
    for k in [Kernel::gauss(), Kernel::IndicatorCube, Kernel::Plateau] {
        for a in [0.0, 0.3, 1.2] {
            let sum = integrate(-10.0, -a, |h| k.eval(&[h]));
            assert!((k.lower_tail(a, 1) - sum).abs() < 1e-8, "{k} a={a}: {} vs {sum}", k.lower_tail(a, 1));
        }
    }
}

#[test]
fn sampled_profile_integrates_hat() {
    let hat = SampledProfile::new("hat", vec![(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)]).unwrap();
    assert!((hat.mass() - 1.0).abs() < 1e-14);
    assert!((hat.eval(0.5) - 0.5).abs() < 1e-14);
    assert!((hat.cumulative(0.0) - 0.5).abs() < 1e-14);
    // the hat transforms to sinc²(ξ/2)
    let xi: f64 = 1.3;
    let want = ((xi / 2.0).sin() / (xi / 2.0)).powi(2);
    assert!((hat.transform(xi).re - want).abs() < 1e-10);
}

#[test]
fn kernel_names_parse() {
    for s in ["gauss:0.7", "modgauss:1,2", "indicator_cube", "plateau"] {
        let k: Kernel = s.parse().unwrap();
        assert_eq!(k.to_string(), s);
    }
    assert!("gauss:-1".parse::<Kernel>().is_err());
    assert!("modgauss:1".parse::<Kernel>().is_err());
    assert!("triangle".parse::<Kernel>().is_err());
}
