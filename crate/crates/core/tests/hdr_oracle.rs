mod common;

use common::{quadrature_beta_cdf, quadrature_beta_mass};
use proptest::prelude::*;
use tstrace_core::bandit::{run_simulation, BanditConfig, Environment};
use tstrace_core::hdr::{beta_cdf, hdr_interval, hdr_series, DEFAULT_EPS};
use tstrace_core::{ArmState, RunTrace, StepRecord, Strategy};

const GRID: [f64; 5] = [0.5, 1.0, 2.0, 8.0, 50.0];

#[test]
fn oracle_reproduces_reference_values() {
    // 30-digit reference values from an arbitrary-precision library
    let cases = [
        (0.3, 2.0, 5.0, 0.579_824_999_999_999_9),
        (0.1, 0.5, 0.5, 0.204_832_764_699_133_45),
        (0.45, 50.0, 50.0, 0.158_652_198_937_098_84),
        (0.01, 0.5, 50.0, 0.682_695_602_125_802_4),
    ];
    for (x, a, b, expected) in cases {
        let got = quadrature_beta_cdf(x, a, b);
        assert!((got - expected).abs() < 1e-11, "oracle I_{x}({a},{b}) = {got}");
    }
}

#[test]
fn cdf_matches_quadrature_on_grid() {
    let mut worst: f64 = 0.0;
    for &a in &GRID {
        for &b in &GRID {
            for i in 1..=99 {
                let x = i as f64 / 100.0;
                let diff = (beta_cdf(x, a, b).unwrap() - quadrature_beta_cdf(x, a, b)).abs();
                assert!(diff <= 1e-8, "I_{x}({a}, {b}) off by {diff}");
                worst = worst.max(diff);
            }
        }
    }
    assert!(worst < 1e-10, "worst deviation {worst}");
}

#[test]
fn cdf_is_monotone_in_x() {
    for &a in &GRID {
        for &b in &GRID {
            let mut prev = 0.0;
            for i in 0..=1000 {
                let f = beta_cdf(i as f64 / 1000.0, a, b).unwrap();
                assert!(f >= prev - 1e-15, "non-monotone at {i} for ({a}, {b})");
                prev = f;
            }
            assert_eq!(prev, 1.0);
        }
    }
}

#[test]
fn band_mass_matches_quadrature() {
    for &a in &GRID {
        for &b in &GRID {
            for rho in [0.25, 0.5, 0.9] {
                let band = hdr_interval(a, b, rho, DEFAULT_EPS).unwrap();
                assert!(band.a <= band.mu && band.mu <= band.b);
                let oracle = quadrature_beta_mass(band.a, band.b, a, b);
                assert!((band.achieved_mass - oracle).abs() < 1e-8, "({a},{b},{rho})");
                if !band.truncated {
                    assert!((oracle - rho).abs() <= 1e-6, "({a},{b},{rho}): mass {oracle}");
                }
            }
        }
    }
}

#[test]
fn single_arm_single_step_series() {
    let meta = {
        let cfg = BanditConfig::new(2, 1, 0);
        let mut m = tstrace_core::RunMeta::for_simulation(&cfg, &Environment::stationary(vec![0.5, 0.5]).unwrap());
        m.num_arms = 1;
        m.environment = None;
        m
    };
    let trace = RunTrace {
        meta,
        steps: vec![StepRecord {
            t: 0,
            arms: vec![ArmState { alpha: 1.0, beta: 1.0, mu: 0.5, draw: 0.4 }],
            chosen_arm: 0,
            reward: 1,
            strategy: Strategy::Exploitation,
            alpha_post: 2.0,
            beta_post: 1.0,
        }],
    };
    let series = hdr_series(&trace, 0.5, DEFAULT_EPS).unwrap();
    assert_eq!(series.len(), 1);
    assert_eq!(series[0].len(), 1);
    assert!((series[0][0].a - 0.25).abs() < 1e-6 && (series[0][0].b - 0.75).abs() < 1e-6);
}

#[test]
fn series_has_one_band_per_arm_and_step() {
    let config = BanditConfig::new(3, 100, 1);
    let trace = run_simulation(&config, &Environment::stationary(vec![0.2, 0.5, 0.8]).unwrap()).unwrap();
    let series = hdr_series(&trace, 0.5, DEFAULT_EPS).unwrap();
    assert_eq!(series.iter().map(Vec::len).sum::<usize>(), 300);
}

#[test]
fn bands_shrink_over_consecutive_successes() {
    let config = BanditConfig::new(2, 200, 3);
    let env = Environment::stationary(vec![0.5, 0.05]).unwrap();
    let trace = run_simulation(&config, &env).unwrap();
    let series = hdr_series(&trace, 0.5, DEFAULT_EPS).unwrap();

    let mut checked = 0;
    for pair in trace.steps.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        if prev.chosen_arm == 0 && prev.reward == 1 && next.chosen_arm == 0 {
            let before = series[0][prev.t].width();
            let after = series[0][next.t].width();
            assert!(after <= before + 1e-12, "t={}: width {before} -> {after}", next.t);
            checked += 1;
        }
    }
    assert!(checked > 20, "only {checked} success runs");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bands_nest_as_rho_grows(a in 0.3f64..200.0, b in 0.3f64..200.0, r1 in 0.05f64..0.9, gap in 0.02f64..0.09) {
        let r2 = r1 + gap;
        let inner = hdr_interval(a, b, r1, DEFAULT_EPS).unwrap();
        let outer = hdr_interval(a, b, r2, DEFAULT_EPS).unwrap();
        prop_assert!(outer.a <= inner.a + 1e-12 && inner.b <= outer.b + 1e-12,
            "rho {r1}: [{}, {}], rho {r2}: [{}, {}]", inner.a, inner.b, outer.a, outer.b);
    }

    #[test]
    fn bands_contain_the_mean(a in 1e-3f64..500.0, b in 1e-3f64..500.0, rho in 0.01f64..0.99) {
        let band = hdr_interval(a, b, rho, DEFAULT_EPS).unwrap();
        prop_assert!(0.0 <= band.a && band.a <= band.mu && band.mu <= band.b && band.b <= 1.0);
        if !band.truncated {
            prop_assert!((band.achieved_mass - rho).abs() <= 1e-6);
        }
    }

    #[test]
    fn symmetric_posteriors_give_symmetric_bands(a in 0.2f64..300.0, rho in 0.05f64..0.95) {
        let band = hdr_interval(a, a, rho, DEFAULT_EPS).unwrap();
        prop_assert!(((0.5 - band.a) - (band.b - 0.5)).abs() <= DEFAULT_EPS);
    }
}
