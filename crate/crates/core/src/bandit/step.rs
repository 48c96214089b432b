use serde::{Deserialize, Serialize};

use super::config::BanditConfig;
use super::env::{env_reward, Environment};
use super::posterior::{apply_discount, update, ArmPosterior};
use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::trace::{RunMeta, RunTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// The chosen arm has the highest posterior mean.
    Exploitation,
    /// A lower-mean arm won on its posterior draw.
    Exploration,
}

/// One arm's post-discount state at a step, plus its posterior draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmState {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub draw: f64,
}

/// Full audit record of one decision step.
///
/// `arms` holds the state after discounting and before the update; the
/// chosen arm's state after the update is `(alpha_post, beta_post)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub arms: Vec<ArmState>,
    pub chosen_arm: usize,
    pub reward: u8,
    pub strategy: Strategy,
    pub alpha_post: f64,
    pub beta_post: f64,
}

impl StepRecord {
    pub fn mus(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.mu).collect()
    }

    pub fn draws(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.draw).collect()
    }

    pub fn chosen(&self) -> &ArmState {
        &self.arms[self.chosen_arm]
    }

    /// Per-arm state after this step's update.
    pub fn post_state(&self) -> Vec<ArmPosterior> {
        self.arms
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k == self.chosen_arm {
                    ArmPosterior { arm_id: k, alpha: self.alpha_post, beta: self.beta_post }
                } else {
                    ArmPosterior { arm_id: k, alpha: a.alpha, beta: a.beta }
                }
            })
            .collect()
    }
}

pub fn initial_state(config: &BanditConfig) -> Vec<ArmPosterior> {
    (0..config.num_arms)
        .map(|k| ArmPosterior { arm_id: k, alpha: config.prior_alpha, beta: config.prior_beta })
        .collect()
}

pub fn sample_draw(posterior: &ArmPosterior, rng: &mut SimRng) -> f64 {
    rng.beta(posterior.alpha, posterior.beta)
}

/// Index of the largest draw; ties go to the lowest index.
pub fn select_arm(draws: &[f64]) -> Result<usize> {
    let (first, rest) = draws
        .split_first()
        .ok_or_else(|| Error::domain("select_arm needs at least one draw"))?;
    let mut best = (0, *first);
    for (k, &d) in rest.iter().enumerate() {
        if d > best.1 {
            best = (k + 1, d);
        }
    }
    Ok(best.0)
}

/// Exploitation iff the chosen arm's mean equals the maximum mean (exact comparison).
pub fn classify_strategy(mus: &[f64], chosen_arm: usize) -> Result<Strategy> {
    let chosen = *mus
        .get(chosen_arm)
        .ok_or_else(|| Error::domain(format!("chosen arm {chosen_arm} out of range")))?;
    let max = mus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(if chosen == max { Strategy::Exploitation } else { Strategy::Exploration })
}

/// Runs one decision step.
///
/// Order is fixed: discount all arms, record, draw arms `0..K` in order,
/// select, observe the reward, update the chosen arm, classify.
pub fn step(
    state: &[ArmPosterior],
    env: &Environment,
    t: usize,
    config: &BanditConfig,
    rng: &mut SimRng,
) -> Result<(Vec<ArmPosterior>, StepRecord)> {
    let mut next = apply_discount(state, config);

    let arms: Vec<ArmState> = next
        .iter()
        .map(|p| ArmState { alpha: p.alpha, beta: p.beta, mu: p.mean(), draw: sample_draw(p, rng) })
        .collect();

    let draws: Vec<f64> = arms.iter().map(|a| a.draw).collect();
    let chosen_arm = select_arm(&draws)?;
    let reward = env_reward(env, t, chosen_arm, rng)?;
    next[chosen_arm] = update(next[chosen_arm], reward)?;

    let mus: Vec<f64> = arms.iter().map(|a| a.mu).collect();
    let strategy = classify_strategy(&mus, chosen_arm)?;

    let record = StepRecord {
        t,
        arms,
        chosen_arm,
        reward,
        strategy,
        alpha_post: next[chosen_arm].alpha,
        beta_post: next[chosen_arm].beta,
    };
    Ok((next, record))
}

/// Runs `config.horizon` steps against `env`.
///
/// The trace's `created_at` is pinned to the Unix epoch so that identical
/// inputs give byte-identical traces; callers that want a wall-clock stamp
/// overwrite `meta.created_at`.
pub fn run_simulation(config: &BanditConfig, env: &Environment) -> Result<RunTrace> {
    config.validate()?;
    env.validate()?;
    if env.num_arms != config.num_arms {
        return Err(Error::config(format!(
            "environment has {} arms but the configuration has {}",
            env.num_arms, config.num_arms
        )));
    }

    let mut rng = SimRng::seed_from_u64(config.seed);
    let mut state = initial_state(config);
    let mut steps = Vec::with_capacity(config.horizon);
    for t in 0..config.horizon {
        let (next, record) = step(&state, env, t, config, &mut rng)?;
        state = next;
        steps.push(record);
    }

    Ok(RunTrace { meta: RunMeta::for_simulation(config, env), steps })
}
