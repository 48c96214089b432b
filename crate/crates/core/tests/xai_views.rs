use tstrace_core::bandit::{run_simulation, BanditConfig, Environment};
use tstrace_core::demo::{generate_demo, pull_share, DEMO_GAMMA, DEMO_WINDOW};
use tstrace_core::xai::{barcode, evidence_series, rare_draw_steps, snapshot_at};
use tstrace_core::Strategy;

#[test]
fn discounted_never_pulled_arm_decays_geometrically() {
    // arm 0 always pays, so arm 1 loses every draw once arm 0 has any evidence;
    // only steps before arm 1's first pull are checked
    let config = BanditConfig::new(2, 200, 6).with_gamma(0.9).with_prior(1.0, 1.0);
    let trace = run_simulation(&config, &Environment::stationary(vec![1.0, 0.0]).unwrap()).unwrap();
    let first_pull = trace.steps.iter().position(|r| r.chosen_arm == 1).unwrap_or(trace.len());
    let series = evidence_series(&trace, 1).unwrap();
    for p in &series[..first_pull] {
        // the pre-update state at 0-indexed step t has been discounted t + 1 times
        let expected = 0.9f64.powi(p.t as i32 + 1).max(config.epsilon_floor);
        assert!((p.alpha - expected).abs() <= 1e-12 * expected);
        assert!((p.beta - expected).abs() <= 1e-12 * expected);
    }
}

#[test]
fn undiscounted_never_pulled_arm_is_flat() {
    let config = BanditConfig::new(3, 50, 0).with_prior(2.0, 3.0);
    let trace = run_simulation(&config, &Environment::stationary(vec![0.5, 0.5, 0.5]).unwrap()).unwrap();
    for arm in 0..3 {
        let series = evidence_series(&trace, arm).unwrap();
        let first_pull = trace.steps.iter().position(|r| r.chosen_arm == arm).unwrap_or(50);
        assert!(series[..=first_pull.min(49)].iter().all(|p| p.alpha == 2.0 && p.beta == 3.0));
    }
}

#[test]
fn demo_exploration_step_is_explained() {
    let demo = generate_demo(0).unwrap();
    let snap = snapshot_at(&demo.trace, demo.step, 0.5).unwrap();
    assert_eq!(snap.strategy, Strategy::Exploration);
    let chosen = snap.entries.iter().find(|e| e.chosen).unwrap();
    let max_mu = snap.entries.iter().map(|e| e.mu).fold(f64::NEG_INFINITY, f64::max);
    let max_draw = snap.entries.iter().map(|e| e.draw).fold(f64::NEG_INFINITY, f64::max);
    assert!(chosen.mu < max_mu);
    assert_eq!(chosen.draw, max_draw);
}

#[test]
fn demo_barcode_densifies_after_exploration() {
    let demo = generate_demo(0).unwrap();
    let s = demo.step;
    let strokes = barcode(&demo.trace, Some(&[demo.arm]), None).unwrap();
    assert!(strokes.iter().all(|x| x.chosen_arm == demo.arm));
    let before = strokes.iter().filter(|x| (s - DEMO_WINDOW..s).contains(&x.t)).count();
    let after = strokes.iter().filter(|x| (s + 1..=s + DEMO_WINDOW).contains(&x.t)).count();
    assert!(after > before, "before {before}, after {after}");
    assert_eq!(pull_share(&demo.trace, demo.arm, s + 1..s + 1 + DEMO_WINDOW), after as f64 / DEMO_WINDOW as f64);
}

#[test]
fn success_raises_alpha_then_idle_decay() {
    let demo = generate_demo(0).unwrap();
    let trace = &demo.trace;
    let mut seen = 0;
    for rec in &trace.steps {
        let t = rec.t;
        if rec.reward != 1 || t + 3 >= trace.len() {
            continue;
        }
        let arm = rec.chosen_arm;
        let series = evidence_series(trace, arm).unwrap();
        let counterfactual = DEMO_GAMMA * series[t].alpha;
        assert!(series[t + 1].alpha > counterfactual);
        // while the arm stays idle its alpha only shrinks
        let mut u = t + 1;
        while u + 1 < trace.len() && trace.steps[u].chosen_arm != arm {
            assert!(series[u + 1].alpha < series[u].alpha);
            u += 1;
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn certain_arm_under_discounting_stops_producing_rare_draws() {
    let config = BanditConfig::new(2, 500, 4).with_gamma(0.95);
    let trace = run_simulation(&config, &Environment::stationary(vec![1.0, 0.5]).unwrap()).unwrap();
    let late = rare_draw_steps(&trace, 0.5).unwrap().into_iter().filter(|r| r.t >= 375).count();
    assert_eq!(late, 0);
}

#[test]
fn rare_draw_rate_is_calibrated_without_discount() {
    for (seed, probs) in [(1, vec![0.8, 0.2]), (2, vec![0.5, 0.4, 0.3]), (3, vec![1.0, 0.5])] {
        let config = BanditConfig::new(probs.len(), 2000, seed);
        let trace = run_simulation(&config, &Environment::stationary(probs).unwrap()).unwrap();
        let rate = rare_draw_steps(&trace, 0.5).unwrap().len() as f64 / 2000.0;
        assert!((0.3..=0.7).contains(&rate), "seed {seed}: rate {rate}");
    }
}
