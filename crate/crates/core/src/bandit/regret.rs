use super::env::Environment;
use crate::error::{Error, Result};
use crate::trace::RunTrace;

/// Running sum of `max_k p_k(t) - p_chosen(t)` against the ground truth.
pub fn cumulative_regret(trace: &RunTrace, env: &Environment) -> Result<Vec<f64>> {
    if env.num_arms != trace.meta.num_arms {
        return Err(Error::domain(format!(
            "environment has {} arms, trace has {}",
            env.num_arms, trace.meta.num_arms
        )));
    }
    let mut total = 0.0;
    trace
        .steps
        .iter()
        .map(|rec| {
            let probs = env.probs_at(rec.t);
            let chosen = *probs
                .get(rec.chosen_arm)
                .ok_or_else(|| Error::domain(format!("chosen arm {} out of range", rec.chosen_arm)))?;
            let best = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            total += best - chosen;
            Ok(total)
        })
        .collect()
}
