use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Ground-truth success probabilities active from `start_step` onward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start_step: usize,
    pub probs: Vec<f64>,
}

/// Piecewise-stationary Bernoulli environment. One segment means stationary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub num_arms: usize,
    pub schedule: Vec<Segment>,
}

impl Environment {
    pub fn new(num_arms: usize, schedule: Vec<Segment>) -> Result<Self> {
        let env = Self { num_arms, schedule };
        env.validate()?;
        Ok(env)
    }

    pub fn stationary(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs.len(), vec![Segment { start_step: 0, probs }])
    }

    /// Parses and validates the JSON environment file format.
    pub fn from_json(text: &str) -> Result<Self> {
        let env: Environment =
            serde_json::from_str(text).map_err(|e| Error::config(format!("environment: {e}")))?;
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        let first = self
            .schedule
            .first()
            .ok_or_else(|| Error::config("environment schedule is empty"))?;
        if first.start_step != 0 {
            return Err(Error::config(format!(
                "first segment must start at step 0, got {}",
                first.start_step
            )));
        }
        for pair in self.schedule.windows(2) {
            if pair[1].start_step <= pair[0].start_step {
                return Err(Error::config(format!(
                    "segment start steps must be strictly increasing ({} then {})",
                    pair[0].start_step, pair[1].start_step
                )));
            }
        }
        for seg in &self.schedule {
            if seg.probs.len() != self.num_arms {
                return Err(Error::config(format!(
                    "segment at step {} has {} probabilities, expected {}",
                    seg.start_step,
                    seg.probs.len(),
                    self.num_arms
                )));
            }
            if let Some(p) = seg.probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::config(format!(
                    "segment at step {}: probability {p} outside [0, 1]",
                    seg.start_step
                )));
            }
        }
        Ok(())
    }

    /// The segment with the largest `start_step <= t`.
    pub fn segment_at(&self, t: usize) -> &Segment {
        let idx = self.schedule.partition_point(|s| s.start_step <= t);
        // the first segment starts at 0, so idx >= 1
        &self.schedule[idx - 1]
    }

    pub fn probs_at(&self, t: usize) -> &[f64] {
        &self.segment_at(t).probs
    }

    pub fn is_stationary(&self) -> bool {
        self.schedule.len() == 1
    }
}

/// Bernoulli reward for pulling `arm` at step `t`. Consumes one uniform.
pub fn env_reward(env: &Environment, t: usize, arm: usize, rng: &mut SimRng) -> Result<u8> {
    let p = *env
        .probs_at(t)
        .get(arm)
        .ok_or_else(|| Error::domain(format!("arm {arm} out of range for {} arms", env.num_arms)))?;
    Ok(u8::from(rng.bernoulli(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_phase() -> Environment {
        Environment::new(
            1,
            vec![
                Segment { start_step: 0, probs: vec![0.2] },
                Segment { start_step: 1000, probs: vec![0.9] },
            ],
        )
        .unwrap()
    }

    #[test]
    fn degenerate_probabilities() {
        let env = Environment::stationary(vec![1.0, 0.0]).unwrap();
        let mut rng = SimRng::seed_from_u64(1);
        for t in 0..500 {
            assert_eq!(env_reward(&env, t, 0, &mut rng).unwrap(), 1);
            assert_eq!(env_reward(&env, t, 1, &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn segment_boundary_lookup() {
        let env = two_phase();
        assert_eq!(env.probs_at(0), &[0.2]);
        assert_eq!(env.probs_at(999), &[0.2]);
        assert_eq!(env.probs_at(1000), &[0.9]);
        assert_eq!(env.probs_at(50_000), &[0.9]);
    }

    #[test]
    fn empirical_rates_follow_active_segment() {
        let env = two_phase();
        let mut rng = SimRng::seed_from_u64(99);
        let n = 10_000;
        let before: u32 = (0..n).map(|_| env_reward(&env, 999, 0, &mut rng).unwrap() as u32).sum();
        let after: u32 = (0..n).map(|_| env_reward(&env, 1000, 0, &mut rng).unwrap() as u32).sum();
        assert!((before as f64 / n as f64 - 0.2).abs() < 0.02);
        assert!((after as f64 / n as f64 - 0.9).abs() < 0.02);
    }

    #[test]
    fn rejects_malformed_schedules() {
        let seg = |s, p: Vec<f64>| Segment { start_step: s, probs: p };
        assert!(Environment::new(2, vec![]).is_err());
        assert!(Environment::new(2, vec![seg(1, vec![0.1, 0.2])]).is_err());
        assert!(Environment::new(2, vec![seg(0, vec![0.1])]).is_err());
        assert!(Environment::new(2, vec![seg(0, vec![0.1, 1.2])]).is_err());
        assert!(Environment::new(2, vec![seg(0, vec![0.1, 0.2]), seg(0, vec![0.3, 0.4])]).is_err());
    }

    #[test]
    fn reward_rejects_bad_arm() {
        let env = Environment::stationary(vec![0.5, 0.5]).unwrap();
        let mut rng = SimRng::seed_from_u64(0);
        assert!(env_reward(&env, 0, 2, &mut rng).is_err());
    }

    #[test]
    fn parses_json_file_format() {
        let env = Environment::from_json(
            r#"{"num_arms":2,"schedule":[{"start_step":0,"probs":[0.8,0.2]},{"start_step":10,"probs":[0.2,0.8]}]}"#,
        )
        .unwrap();
        assert!(!env.is_stationary());
        assert_eq!(env.probs_at(10), &[0.2, 0.8]);
    }
}
