//! Canonical run-trace model, its JSON-Lines file format and validation.

mod io;
mod validate;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bandit::{ArmPosterior, BanditConfig, DiscountMode, Environment, StepRecord};
use crate::error::{Error, Result};
use crate::rng::RNG_ALGORITHM;

pub use io::{deserialize_trace, parse_trace, read_trace_file, serialize_trace, to_bytes, write_trace_file};
pub use validate::{update_consistent, validate_external, Finding, Rule};

pub const SCHEMA_VERSION: u32 = 1;

/// Conventional file suffix for trace files.
pub const TRACE_SUFFIX: &str = ".tst.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub run_id: String,
    pub num_arms: usize,
    pub gamma: f64,
    pub discount_mode: DiscountMode,
    pub prior_alpha: f64,
    pub prior_beta: f64,
    pub seed: u64,
    pub horizon: usize,
    pub rng_algorithm: String,
    /// Ground truth; absent for traces ingested from external systems.
    pub environment: Option<Environment>,
    pub created_at: DateTime<Utc>,
    pub schema_version: u32,
}

impl RunMeta {
    /// Metadata for an engine run. `run_id` is a digest of the configuration
    /// and environment, so reruns of the same inputs share an id.
    pub fn for_simulation(config: &BanditConfig, env: &Environment) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(config).expect("config serializes"));
        hasher.update(serde_json::to_vec(env).expect("environment serializes"));
        let digest = hasher.finalize();
        let short: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();

        Self {
            run_id: format!("run-{}-{short}", config.seed),
            num_arms: config.num_arms,
            gamma: config.gamma,
            discount_mode: config.discount_mode,
            prior_alpha: config.prior_alpha,
            prior_beta: config.prior_beta,
            seed: config.seed,
            horizon: config.horizon,
            rng_algorithm: format!(
                "{RNG_ALGORITHM};order=discount,draws,reward;engine={}",
                crate::ENGINE_VERSION
            ),
            environment: Some(env.clone()),
            created_at: DateTime::<Utc>::UNIX_EPOCH,
            schema_version: SCHEMA_VERSION,
        }
    }

    /// Configuration equivalent to this metadata (epsilon floor at its default).
    pub fn config(&self) -> BanditConfig {
        BanditConfig {
            num_arms: self.num_arms,
            gamma: self.gamma,
            prior_alpha: self.prior_alpha,
            prior_beta: self.prior_beta,
            seed: self.seed,
            horizon: self.horizon,
            discount_mode: self.discount_mode,
            epsilon_floor: BanditConfig::DEFAULT_EPSILON_FLOOR,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.num_arms < 2 {
            return Err(Error::Validation(format!("num_arms must be >= 2, got {}", self.num_arms)));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Validation(format!("gamma {} outside (0, 1]", self.gamma)));
        }
        if let Some(env) = &self.environment {
            env.validate().map_err(|e| Error::Validation(e.to_string()))?;
            if env.num_arms != self.num_arms {
                return Err(Error::Validation(format!(
                    "environment has {} arms, meta declares {}",
                    env.num_arms, self.num_arms
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub meta: RunMeta,
    pub steps: Vec<StepRecord>,
}

impl RunTrace {
    pub fn num_arms(&self) -> usize {
        self.meta.num_arms
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Per-arm state after the last step, or the prior for an empty trace.
    pub fn final_state(&self) -> Vec<ArmPosterior> {
        match self.steps.last() {
            Some(rec) => rec.post_state(),
            None => (0..self.meta.num_arms)
                .map(|k| ArmPosterior {
                    arm_id: k,
                    alpha: self.meta.prior_alpha,
                    beta: self.meta.prior_beta,
                })
                .collect(),
        }
    }

    /// Pull and success counts per arm.
    pub fn pull_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.meta.num_arms];
        for rec in &self.steps {
            counts[rec.chosen_arm].0 += 1;
            counts[rec.chosen_arm].1 += rec.reward as usize;
        }
        counts
    }

    /// Structural invariants every loadable trace must satisfy: valid meta,
    /// contiguous `t` from 0, `num_arms` entries per step, in-range chosen
    /// arm and reward, and a +1 update on exactly one parameter.
    pub fn check_invariants(&self) -> Result<()> {
        self.meta.validate()?;
        let k = self.meta.num_arms;
        for (i, rec) in self.steps.iter().enumerate() {
            if rec.t != i {
                return Err(Error::Validation(if rec.t > i {
                    format!("gap at t={i}")
                } else {
                    format!("out-of-order step t={} at position {i}", rec.t)
                }));
            }
            if rec.arms.len() != k {
                return Err(Error::Validation(format!(
                    "t={i}: {} arm entries, expected {k}",
                    rec.arms.len()
                )));
            }
            if rec.chosen_arm >= k {
                return Err(Error::Validation(format!(
                    "t={i}: chosen_arm {} out of range",
                    rec.chosen_arm
                )));
            }
            if rec.reward > 1 {
                return Err(Error::Validation(format!("t={i}: reward {} not in {{0, 1}}", rec.reward)));
            }
            if !update_consistent(rec) {
                return Err(Error::Validation(format!(
                    "t={i}: update invariant violated for arm {} (pre ({}, {}), post ({}, {}), reward {})",
                    rec.chosen_arm,
                    rec.chosen().alpha,
                    rec.chosen().beta,
                    rec.alpha_post,
                    rec.beta_post,
                    rec.reward
                )));
            }
        }
        Ok(())
    }
}
