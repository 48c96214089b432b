//! The TS/DTS decision loop over Bernoulli arms with Beta posteriors.

mod config;
mod env;
mod posterior;
mod regret;
mod step;

pub use config::{BanditConfig, DiscountMode};
pub use env::{env_reward, Environment, Segment};
pub use posterior::{apply_discount, posterior_mean, update, ArmPosterior};
pub use regret::cumulative_regret;
pub use step::{
    classify_strategy, initial_state, run_simulation, sample_draw, select_arm, step, ArmState,
    StepRecord, Strategy,
};
