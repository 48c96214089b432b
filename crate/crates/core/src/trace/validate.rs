//! Consistency checks for traces from any producer.
//!
//! Discount consistency is checked against two references: the state replayed
//! from the prior using only the recorded choices and rewards, and a one-step
//! discount of the previous record. A step is flagged only when it disagrees
//! with both, so one corrupted value yields one finding instead of a cascade,
//! and a producer that shifts its state once is flagged once and then followed.

use std::fmt;

use serde::Serialize;

use super::RunTrace;
use crate::bandit::{classify_strategy, select_arm, BanditConfig, DiscountMode, StepRecord};

/// Relative tolerance for comparing pseudo-counts from external producers.
const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Step index gaps, wrong arm count, out-of-range arm or reward.
    Structure,
    /// The chosen arm must gain exactly +1 on alpha (success) or beta (failure).
    UpdateLogic,
    /// Arms must carry the discounted state of the previous step.
    Discount,
    /// The chosen arm must hold the largest draw, lowest index on ties.
    Selection,
    /// The strategy label must match the recomputed posterior-mean ranking.
    Strategy,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Structure => "structure",
            Rule::UpdateLogic => "update_logic",
            Rule::Discount => "discount",
            Rule::Selection => "selection",
            Rule::Strategy => "strategy",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub t: usize,
    pub arm: Option<usize>,
    pub rule: Rule,
    pub expected: String,
    pub observed: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} ", self.t)?;
        if let Some(arm) = self.arm {
            write!(f, "arm={arm} ")?;
        }
        write!(f, "{}: expected {}, observed {}", self.rule, self.expected, self.observed)
    }
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

/// True when the chosen arm's post state is its pre state plus one success or failure.
pub fn update_consistent(rec: &StepRecord) -> bool {
    let Some(pre) = rec.arms.get(rec.chosen_arm) else {
        return false;
    };
    match rec.reward {
        1 => close(rec.alpha_post, pre.alpha + 1.0) && close(rec.beta_post, pre.beta),
        0 => close(rec.alpha_post, pre.alpha) && close(rec.beta_post, pre.beta + 1.0),
        _ => false,
    }
}

fn discount(config: &BanditConfig, (alpha, beta): (f64, f64)) -> (f64, f64) {
    match config.discount_mode {
        DiscountMode::PaperLiteral => (
            (config.gamma * alpha).max(config.epsilon_floor),
            (config.gamma * beta).max(config.epsilon_floor),
        ),
        DiscountMode::PriorAnchored => (
            config.prior_alpha + config.gamma * (alpha - config.prior_alpha),
            config.prior_beta + config.gamma * (beta - config.prior_beta),
        ),
    }
}

/// Checks update logic, discount consistency, selection and strategy labels.
/// An empty result means the trace conforms.
pub fn validate_external(trace: &RunTrace) -> Vec<Finding> {
    let config = trace.meta.config();
    let k = trace.meta.num_arms;
    let mut findings = Vec::new();

    let prior = (config.prior_alpha, config.prior_beta);
    // post-update state replayed from the prior
    let mut replay = vec![prior; k];
    // post-update state as recorded at the previous step
    let mut previous: Option<Vec<(f64, f64)>> = Some(vec![prior; k]);

    for (i, rec) in trace.steps.iter().enumerate() {
        if rec.t != i {
            findings.push(Finding {
                t: rec.t,
                arm: None,
                rule: Rule::Structure,
                expected: format!("t={i}"),
                observed: format!("t={}", rec.t),
            });
        }
        if rec.arms.len() != k || rec.chosen_arm >= k || rec.reward > 1 {
            findings.push(Finding {
                t: rec.t,
                arm: None,
                rule: Rule::Structure,
                expected: format!("{k} arms, chosen_arm < {k}, reward in {{0, 1}}"),
                observed: format!(
                    "{} arms, chosen_arm {}, reward {}",
                    rec.arms.len(),
                    rec.chosen_arm,
                    rec.reward
                ),
            });
            previous = None;
            continue;
        }

        // discount consistency
        let mut base = Vec::with_capacity(k);
        for (arm, state) in rec.arms.iter().enumerate() {
            let observed = (state.alpha, state.beta);
            let from_replay = discount(&config, replay[arm]);
            let from_previous = previous.as_ref().map(|p| discount(&config, p[arm]));
            let matches = |e: (f64, f64)| close(observed.0, e.0) && close(observed.1, e.1);

            if matches(from_replay) {
                base.push(from_replay);
            } else if from_previous.is_some_and(matches) {
                base.push(observed);
            } else {
                findings.push(Finding {
                    t: rec.t,
                    arm: Some(arm),
                    rule: Rule::Discount,
                    expected: format!("(alpha, beta) = ({}, {})", from_replay.0, from_replay.1),
                    observed: format!("({}, {})", observed.0, observed.1),
                });
                base.push(from_replay);
            }
        }

        if !update_consistent(rec) {
            let pre = rec.chosen();
            let (ea, eb) = if rec.reward == 1 { (pre.alpha + 1.0, pre.beta) } else { (pre.alpha, pre.beta + 1.0) };
            findings.push(Finding {
                t: rec.t,
                arm: Some(rec.chosen_arm),
                rule: Rule::UpdateLogic,
                expected: format!("post (alpha, beta) = ({ea}, {eb}) for reward {}", rec.reward),
                observed: format!("({}, {})", rec.alpha_post, rec.beta_post),
            });
        }

        let draws = rec.draws();
        if let Ok(best) = select_arm(&draws) {
            if best != rec.chosen_arm {
                findings.push(Finding {
                    t: rec.t,
                    arm: Some(rec.chosen_arm),
                    rule: Rule::Selection,
                    expected: format!("chosen_arm = {best} (largest draw {})", draws[best]),
                    observed: format!("chosen_arm = {} (draw {})", rec.chosen_arm, draws[rec.chosen_arm]),
                });
            }
        }

        let mus: Vec<f64> = rec.arms.iter().map(|a| a.alpha / (a.alpha + a.beta)).collect();
        if let Ok(expected) = classify_strategy(&mus, rec.chosen_arm) {
            if expected != rec.strategy {
                findings.push(Finding {
                    t: rec.t,
                    arm: Some(rec.chosen_arm),
                    rule: Rule::Strategy,
                    expected: format!("{expected:?}").to_lowercase(),
                    observed: format!("{:?}", rec.strategy).to_lowercase(),
                });
            }
        }

        let increment = if rec.reward == 1 { (1.0, 0.0) } else { (0.0, 1.0) };
        let chosen = base[rec.chosen_arm];
        base[rec.chosen_arm] = (chosen.0 + increment.0, chosen.1 + increment.1);
        replay = base;
        previous = Some(rec.post_state().iter().map(|p| (p.alpha, p.beta)).collect());
    }

    findings
}
