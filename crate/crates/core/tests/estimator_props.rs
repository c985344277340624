//! Estimator properties and the small illustrative designs.

use csvt::synth::{
    pathology_dataset, replication_rng, sample_dataset, seeded_rng, single_component_dataset,
    theoretical_delta, CenterMode, MixtureDesign, NoiseModel,
};
use csvt::theory::pathology_delta;
use csvt::{csvt, raw_count, threshold, DataMatrix, Strategy as Route, TnRule};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

/// Two to four well separated groups plus noise.
fn clustered(p: usize, n: usize, k: usize, sep: f64, seed: u64) -> DataMatrix {
    let mut rng = seeded_rng(seed);
    DataMatrix::from_fn(p, n, |row, col| {
        let c = col % k;
        let mean = if row == c % p { sep } else { 0.0 };
        mean + rng.sample::<f64, _>(StandardNormal)
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn csvt_is_shift_invariant(
        p in 2usize..15, n in 6usize..60, k in 1usize..4, sep in 0.0..30.0f64,
        seed in any::<u64>(), c in prop::collection::vec(-50.0..50.0f64, 15),
    ) {
        let x = clustered(p, n, k, sep, seed);
        let shifted = x.shifted(&c[..p]).unwrap();
        for route in [Route::Direct, Route::Gram] {
            let a = csvt(&x, TnRule::LogN, route).unwrap();
            let b = csvt(&shifted, TnRule::LogN, route).unwrap();
            prop_assert_eq!((a.r, a.k_hat), (b.r, b.k_hat));
        }
    }

    #[test]
    fn larger_tn_never_increases_r(
        p in 1usize..15, n in 2usize..60, sep in 0.0..30.0f64, seed in any::<u64>(),
        t1 in 0.0..20.0f64, dt in 0.0..20.0f64,
    ) {
        let x = clustered(p, n, 3, sep, seed);
        let a = csvt(&x, TnRule::Explicit(t1), Route::Auto).unwrap();
        let b = csvt(&x, TnRule::Explicit(t1 + dt), Route::Auto).unwrap();
        prop_assert!(b.r <= a.r);
    }

    #[test]
    fn k_hat_bounds(
        p in 1usize..15, n in 2usize..40, sep in 0.0..100.0f64, seed in any::<u64>(), t in 0.0..5.0f64,
    ) {
        let x = clustered(p, n, 4, sep, seed);
        let rep = csvt(&x, TnRule::Explicit(t), Route::Auto).unwrap();
        prop_assert!(rep.k_hat >= 1);
        prop_assert!(rep.k_hat <= p.min(n - 1) + 1);
        prop_assert_eq!(rep.k_hat, rep.r + 1);
    }
}

#[test]
fn strictness_around_a_singular_value() {
    let x = clustered(5, 30, 3, 8.0, 2);
    let rep = csvt(&x, TnRule::LogN, Route::Direct).unwrap();
    let s = rep.spectrum.singular_values[1];
    let base = (5f64).sqrt() + (30f64).sqrt();
    let below = csvt(&x, TnRule::Explicit(s - base - 1e-9), Route::Direct).unwrap();
    let above = csvt(&x, TnRule::Explicit(s - base + 1e-9), Route::Direct).unwrap();
    assert_eq!(below.r, above.r + 1);
}

#[test]
fn single_component_raw_zero_centered_one() {
    let mu = 0.1 * 20f64.sqrt();
    assert!((mu - 0.4472).abs() < 1e-4);
    let (mut raw_zero, mut one) = (0, 0);
    for rep in 0..100 {
        let x = single_component_dataset(mu, 100, 20, &mut replication_rng(5, rep)).unwrap();
        raw_zero += usize::from(raw_count(&x, TnRule::LogN, Route::Auto).unwrap() == 0);
        one += usize::from(csvt(&x, TnRule::LogN, Route::Auto).unwrap().k_hat == 1);
    }
    assert!(raw_zero >= 95 && one >= 95, "{raw_zero} {one}");
    let t = threshold(20, 100, TnRule::LogN).unwrap().threshold;
    assert!((t - 19.077).abs() < 5e-4);
}

#[test]
fn five_clusters_seed_one() {
    let (n, p, k) = (1000, 20, 5);
    let delta = theoretical_delta(n, p, k, 1.0, 1.0, TnRule::LogN, 1.0).unwrap();
    // 2√2·√(5/1000)·(√20 + √1000 + ln 1000), evaluated independently
    assert!((delta - 8.600533567133102).abs() < 1e-12);
    let mut rng = seeded_rng(1);
    let design =
        MixtureDesign::orthonormal(p, n, k, 1.0, delta, CenterMode::Basis, &mut rng).unwrap();
    let (x, _) = sample_dataset(&design, NoiseModel::Unit, &mut rng).unwrap();
    let rep = csvt(&x, TnRule::LogN, Route::Auto).unwrap();
    assert_eq!((rep.k_hat, rep.r), (5, 4));
}

#[test]
fn collinear_design_fools_raw_count_only() {
    let delta = pathology_delta(100, 100, 50, 2.0).unwrap();
    let (mut raw_one, mut two) = (0, 0);
    for rep in 0..100 {
        let (x, _) =
            pathology_dataset(100.0, delta, 100, 100, 50, &mut replication_rng(6, rep)).unwrap();
        raw_one += usize::from(raw_count(&x, TnRule::LogN, Route::Auto).unwrap() == 1);
        two += usize::from(csvt(&x, TnRule::LogN, Route::Auto).unwrap().k_hat == 2);
    }
    assert!(raw_one >= 95 && two >= 95, "{raw_one} {two}");
}

#[test]
fn threshold_at_gamma_one_doubles_in_signal_bound() {
    // with κ = 1 and γ = 1 the signal lower bound (Δ/κ)·√(βn/2K) is exactly 2T
    let (n, p, k, beta) = (5000, 40, 7, 0.3);
    let t = threshold(p, n, TnRule::LogN).unwrap().threshold;
    let delta = theoretical_delta(n, p, k, beta, 1.0, TnRule::LogN, 1.0).unwrap();
    let bound = csvt::theory::signal_lower_bound(delta, 1.0, beta, n, k);
    assert!((bound - 2.0 * t).abs() < 1e-12 * t);
}
