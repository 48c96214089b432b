use serde::{Deserialize, Serialize};

use super::config::{BanditConfig, DiscountMode};
use crate::error::{Error, Result};

/// Beta pseudo-counts for one arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmPosterior {
    pub arm_id: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl ArmPosterior {
    pub fn new(arm_id: usize, alpha: f64, beta: f64) -> Result<Self> {
        check_params(alpha, beta)?;
        Ok(Self { arm_id, alpha, beta })
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// This arm after one discount step under `config`.
    pub fn discounted(&self, config: &BanditConfig) -> Self {
        let gamma = config.gamma;
        let (alpha, beta) = match config.discount_mode {
            DiscountMode::PaperLiteral => (
                (gamma * self.alpha).max(config.epsilon_floor),
                (gamma * self.beta).max(config.epsilon_floor),
            ),
            DiscountMode::PriorAnchored => (
                config.prior_alpha + gamma * (self.alpha - config.prior_alpha),
                config.prior_beta + gamma * (self.beta - config.prior_beta),
            ),
        };
        Self { arm_id: self.arm_id, alpha, beta }
    }
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "Beta parameters must be positive and finite, got ({alpha}, {beta})"
        )))
    }
}

/// `alpha / (alpha + beta)`.
pub fn posterior_mean(alpha: f64, beta: f64) -> Result<f64> {
    check_params(alpha, beta)?;
    Ok(alpha / (alpha + beta))
}

/// Discounts every arm, idle or not.
pub fn apply_discount(posteriors: &[ArmPosterior], config: &BanditConfig) -> Vec<ArmPosterior> {
    posteriors.iter().map(|p| p.discounted(config)).collect()
}

/// Adds one success (`reward = 1`) or one failure (`reward = 0`).
pub fn update(posterior: ArmPosterior, reward: u8) -> Result<ArmPosterior> {
    match reward {
        1 => Ok(ArmPosterior { alpha: posterior.alpha + 1.0, ..posterior }),
        0 => Ok(ArmPosterior { beta: posterior.beta + 1.0, ..posterior }),
        r => Err(Error::domain(format!("reward must be 0 or 1, got {r}"))),
    }
}
