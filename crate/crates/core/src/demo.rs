//! Bundled non-stationary showcase: ten arms where the early leader (arm 8)
//! fades and a mid-ranked arm (arm 7) becomes best, run with DTS so the
//! trace shows exploration paying off and idle arms decaying.

use crate::bandit::{run_simulation, BanditConfig, Environment, Segment, Strategy};
use crate::error::{Error, Result};
use crate::trace::RunTrace;

pub const DEMO_ARMS: usize = 10;
pub const DEMO_HORIZON: usize = 600;
pub const DEMO_GAMMA: f64 = 0.97;
/// Width of the before/after windows compared around an exploration step.
pub const DEMO_WINDOW: usize = 100;
const MAX_SEED_ATTEMPTS: u64 = 10_000;

pub fn demo_environment() -> Environment {
    let early = vec![0.10, 0.15, 0.20, 0.12, 0.25, 0.18, 0.30, 0.45, 0.60, 0.22];
    let late = vec![0.10, 0.15, 0.20, 0.12, 0.25, 0.18, 0.30, 0.85, 0.35, 0.22];
    Environment::new(
        DEMO_ARMS,
        vec![Segment { start_step: 0, probs: early }, Segment { start_step: 250, probs: late }],
    )
    .expect("demo environment is well formed")
}

pub fn demo_config(seed: u64) -> BanditConfig {
    BanditConfig::new(DEMO_ARMS, DEMO_HORIZON, seed).with_gamma(DEMO_GAMMA)
}

#[derive(Debug, Clone)]
pub struct DemoRun {
    pub trace: RunTrace,
    /// First exploration step that paid off and raised the arm's share.
    pub step: usize,
    pub arm: usize,
    pub share_before: f64,
    pub share_after: f64,
}

/// Share of steps in `range` that chose `arm`.
pub fn pull_share(trace: &RunTrace, arm: usize, range: std::ops::Range<usize>) -> f64 {
    let len = range.len();
    if len == 0 {
        return 0.0;
    }
    let hits = trace.steps[range].iter().filter(|r| r.chosen_arm == arm).count();
    hits as f64 / len as f64
}

/// First successful exploration step `s` after which the explored arm's
/// pull share over `(s, s + window]` strictly exceeds its share over
/// `[s - window, s)`.
pub fn find_exploration_payoff(trace: &RunTrace, window: usize) -> Option<(usize, f64, f64)> {
    let n = trace.len();
    (window..n.saturating_sub(window)).find_map(|s| {
        let rec = &trace.steps[s];
        if rec.strategy != Strategy::Exploration || rec.reward != 1 {
            return None;
        }
        let before = pull_share(trace, rec.chosen_arm, s - window..s);
        let after = pull_share(trace, rec.chosen_arm, s + 1..s + 1 + window);
        (after > before).then_some((s, before, after))
    })
}

/// Searches seeds upward from `start_seed` until the demo trace shows the pattern.
pub fn generate_demo(start_seed: u64) -> Result<DemoRun> {
    let env = demo_environment();
    for seed in start_seed..start_seed.saturating_add(MAX_SEED_ATTEMPTS) {
        let trace = run_simulation(&demo_config(seed), &env)?;
        if let Some((step, share_before, share_after)) = find_exploration_payoff(&trace, DEMO_WINDOW) {
            let arm = trace.steps[step].chosen_arm;
            return Ok(DemoRun { trace, step, arm, share_before, share_after });
        }
    }
    Err(Error::Config(format!(
        "no seed in [{start_seed}, {start_seed} + {MAX_SEED_ATTEMPTS}) produced the exploration pattern"
    )))
}
