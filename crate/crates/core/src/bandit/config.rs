use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the discount factor acts on the pseudo-counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DiscountMode {
    /// `alpha <- gamma * alpha`, clamped below at the epsilon floor.
    #[default]
    PaperLiteral,
    /// Only the evidence above the prior decays: `alpha <- a0 + gamma * (alpha - a0)`.
    PriorAnchored,
}

impl DiscountMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscountMode::PaperLiteral => "paper_literal",
            DiscountMode::PriorAnchored => "prior_anchored",
        }
    }
}

impl std::str::FromStr for DiscountMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_literal" => Ok(DiscountMode::PaperLiteral),
            "prior_anchored" => Ok(DiscountMode::PriorAnchored),
            other => Err(Error::config(format!(
                "unknown discount mode {other:?} (expected paper_literal or prior_anchored)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditConfig {
    pub num_arms: usize,
    /// Discount factor in `(0, 1]`; `1.0` is plain Thompson Sampling.
    pub gamma: f64,
    pub prior_alpha: f64,
    pub prior_beta: f64,
    pub seed: u64,
    pub horizon: usize,
    pub discount_mode: DiscountMode,
    pub epsilon_floor: f64,
}

impl BanditConfig {
    pub const DEFAULT_EPSILON_FLOOR: f64 = 1e-9;

    /// Plain TS with a uniform `Beta(1, 1)` prior.
    pub fn new(num_arms: usize, horizon: usize, seed: u64) -> Self {
        Self {
            num_arms,
            gamma: 1.0,
            prior_alpha: 1.0,
            prior_beta: 1.0,
            seed,
            horizon,
            discount_mode: DiscountMode::PaperLiteral,
            epsilon_floor: Self::DEFAULT_EPSILON_FLOOR,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_prior(mut self, alpha: f64, beta: f64) -> Self {
        self.prior_alpha = alpha;
        self.prior_beta = beta;
        self
    }

    pub fn with_discount_mode(mut self, mode: DiscountMode) -> Self {
        self.discount_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_arms < 2 {
            return Err(Error::config(format!(
                "num_arms must be at least 2, got {}",
                self.num_arms
            )));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::config(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        if self.horizon < 1 {
            return Err(Error::config("horizon must be at least 1"));
        }
        for (name, value) in [
            ("prior_alpha", self.prior_alpha),
            ("prior_beta", self.prior_beta),
            ("epsilon_floor", self.epsilon_floor),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}
