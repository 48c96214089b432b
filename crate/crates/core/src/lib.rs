//! Deterministic Thompson Sampling (TS) and Discounted Thompson Sampling (DTS)
//! over Bernoulli arms, with per-step explanation traces.
//!
//! Every run produces a [`RunTrace`]: the full per-arm posterior state, the
//! posterior draws, the chosen arm, the reward and a strategy label for each
//! step. All analytical views (HDR bands, evidence series, barcode strokes,
//! XAI snapshots) are derived from the trace alone.

pub mod bandit;
pub mod demo;
mod error;
pub mod hdr;
pub mod rng;
pub mod trace;
pub mod xai;

pub use bandit::{
    apply_discount, classify_strategy, cumulative_regret, posterior_mean, run_simulation,
    select_arm, step, update, ArmPosterior, ArmState, BanditConfig, DiscountMode, Environment,
    Segment, StepRecord, Strategy,
};
pub use error::{Error, Result};
pub use hdr::{beta_cdf, hdr_interval, hdr_series, is_draw_outside_hdr, HdrBand};
pub use rng::SimRng;
pub use trace::{RunMeta, RunTrace};

/// Engine version recorded in every trace produced by this crate.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
