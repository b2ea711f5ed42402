use alphaindex::distribution::{
    build_histogram, fit_giddings, fit_giddings_points, giddings_eval, kurtosis, power_law_slope, shapiro_wilk,
    skewness, BinningMode, GiddingsParams,
};
use alphaindex::special::{bessel_i1, bessel_i1_scaled};
use alphaindex::SeedStream;
use proptest::prelude::*;
use rand::Rng;

const PUBLISHED: GiddingsParams<f64> = GiddingsParams {
    baseline: 0.912,
    amplitude: 1118.453,
    width: 2.518,
    center: 10.44,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn giddings_noisy_points() {
    let h: Vec<f64> = (1..=60).map(f64::from).collect();
    let mut rng = SeedStream::new(2024).rng();
    let y: Vec<f64> = h
        .iter()
        .map(|&x| giddings_eval(x, &PUBLISHED).unwrap() * (1.0 + 0.01 * rng.random_range(-1.0..1.0)))
        .collect();
    let fit = fit_giddings_points(&h, &y).unwrap();
    let p = fit.params;
    for (got, want) in [
        (p.baseline, PUBLISHED.baseline),
        (p.amplitude, PUBLISHED.amplitude),
        (p.width, PUBLISHED.width),
        (p.center, PUBLISHED.center),
    ] {
        assert!(rel(got, want) < 0.05, "{p:?}");
    }
    let rss: f64 = h
        .iter()
        .zip(&y)
        .map(|(&x, &v)| (v - giddings_eval(x, &p).unwrap()).powi(2))
        .sum();
    assert!(rel(fit.residual_ss, rss) < 1e-9);
}

#[test]
fn giddings_from_geometric_histogram() {
    // the fit only needs positive centers, so geometric bins work as well
    let data: Vec<f64> = (1..=200).map(|i| 1.0 + f64::from(i % 37)).collect();
    let hist = build_histogram(&data, BinningMode::Geometric, 1.3).unwrap();
    let fit = fit_giddings(&hist);
    assert!(fit.is_ok(), "{fit:?}");
}

#[test]
fn bessel_scaled_agrees_with_unscaled() {
    for i in 0..=700 {
        let x = f64::from(i);
        let a = bessel_i1(x).unwrap() * (-x).exp();
        let b = bessel_i1_scaled(x).unwrap();
        assert!((a - b).abs() <= 1e-13 * b.max(1e-300), "x={x}");
    }
}

#[test]
fn slope_drops_zero_pairs() {
    let mut pairs: Vec<(u64, u64)> = (1..=20).map(|h| (h, h * h)).collect();
    pairs.extend([(0, 5), (3, 0)]);
    let fit = power_law_slope::<f64>(&pairs).unwrap();
    assert_eq!(fit.points_used, 20);
    assert_eq!(fit.dropped, 2);
    assert!((fit.slope - 2.0).abs() < 1e-12);
    assert!(power_law_slope::<f64>(&[(1, 1)]).is_err());
}

proptest! {
    #[test]
    fn shape_statistics_invariance(
        x in prop::collection::vec(-50.0f64..50.0, 4..60),
        shift in -1e3f64..1e3,
        scale in 0.01f64..100.0,
    ) {
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / x.len() as f64;
        prop_assume!(var > 1e-3);
        let moved: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
        let flipped: Vec<f64> = x.iter().map(|v| -v * scale).collect();
        let k = kurtosis(&x).unwrap();
        let s = skewness(&x).unwrap();
        prop_assert!((kurtosis(&moved).unwrap() - k).abs() < 1e-9 * (1.0 + k.abs()));
        prop_assert!((skewness(&moved).unwrap() - s).abs() < 1e-9 * (1.0 + s.abs()));
        prop_assert!((skewness(&flipped).unwrap() + s).abs() < 1e-9 * (1.0 + s.abs()));
    }

    #[test]
    fn shapiro_wilk_affine_invariant(
        x in prop::collection::vec(-50.0f64..50.0, 3..200),
        shift in -1e3f64..1e3,
        scale in 0.01f64..100.0,
    ) {
        let spread = x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
        prop_assume!(spread > 1e-3);
        let a = shapiro_wilk(&x).unwrap();
        let moved: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
        let b = shapiro_wilk(&moved).unwrap();
        prop_assert!((a.w - b.w).abs() < 1e-9);
        prop_assert!(a.w > 0.0 && a.w <= 1.0);
        prop_assert!((0.0..=1.0).contains(&a.p_value));
        prop_assert_eq!(a.normal_at_5pct, a.p_value > 0.05);
    }
}
