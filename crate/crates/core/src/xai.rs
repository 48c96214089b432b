//! Explanation artifacts derived from a trace: step snapshots, barcode
//! strokes, evidence series and rare-draw flags.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::bandit::Strategy;
use crate::error::{Error, Result};
use crate::hdr::{hdr_interval, is_draw_outside_hdr, HdrBand, DEFAULT_EPS};
use crate::trace::RunTrace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub arm_id: usize,
    pub mu: f64,
    pub draw: f64,
    pub chosen: bool,
}

/// Why the arm at step `t` was chosen: every arm's mean against its draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotView {
    pub t: usize,
    pub rho: f64,
    pub entries: Vec<SnapshotEntry>,
    pub chosen_arm: usize,
    pub strategy: Strategy,
    /// The chosen arm's draw lies outside its `rho` band.
    pub rare_draw: bool,
    pub chosen_band: HdrBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Failure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarcodeStroke {
    pub t: usize,
    pub chosen_arm: usize,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidencePoint {
    pub t: usize,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RareDraw {
    pub t: usize,
    pub arm: usize,
    pub draw: f64,
    pub band: HdrBand,
}

pub fn snapshot_at(trace: &RunTrace, t: usize, rho: f64) -> Result<SnapshotView> {
    let rec = trace
        .steps
        .get(t)
        .ok_or_else(|| Error::domain(format!("step {t} out of range for {} steps", trace.len())))?;
    let entries = rec
        .arms
        .iter()
        .enumerate()
        .map(|(k, a)| SnapshotEntry { arm_id: k, mu: a.mu, draw: a.draw, chosen: k == rec.chosen_arm })
        .collect();
    let chosen = rec.chosen();
    let chosen_band = hdr_interval(chosen.alpha, chosen.beta, rho, DEFAULT_EPS)?;
    Ok(SnapshotView {
        t: rec.t,
        rho,
        entries,
        chosen_arm: rec.chosen_arm,
        strategy: rec.strategy,
        rare_draw: is_draw_outside_hdr(chosen.draw, &chosen_band),
        chosen_band,
    })
}

/// Clamps `range` to the trace length; an inverted range is an error.
pub fn clamp_range(trace: &RunTrace, range: Option<Range<usize>>) -> Result<Range<usize>> {
    let n = trace.len();
    let Some(r) = range else {
        return Ok(0..n);
    };
    if r.start > r.end {
        return Err(Error::domain(format!("inverted step range [{}, {})", r.start, r.end)));
    }
    Ok(r.start.min(n)..r.end.min(n))
}

/// Selection history, one stroke per step in `range` whose arm passes `arms`.
pub fn barcode(
    trace: &RunTrace,
    arms: Option<&[usize]>,
    range: Option<Range<usize>>,
) -> Result<Vec<BarcodeStroke>> {
    let range = clamp_range(trace, range)?;
    Ok(trace.steps[range]
        .iter()
        .filter(|rec| arms.is_none_or(|set| set.contains(&rec.chosen_arm)))
        .map(|rec| BarcodeStroke {
            t: rec.t,
            chosen_arm: rec.chosen_arm,
            outcome: if rec.reward == 1 { Outcome::Success } else { Outcome::Failure },
        })
        .collect())
}

/// Post-discount `(alpha, beta)` of one arm at every step.
pub fn evidence_series(trace: &RunTrace, arm: usize) -> Result<Vec<EvidencePoint>> {
    if arm >= trace.num_arms() {
        return Err(Error::domain(format!("arm {arm} out of range for {} arms", trace.num_arms())));
    }
    Ok(trace
        .steps
        .iter()
        .map(|rec| EvidencePoint { t: rec.t, alpha: rec.arms[arm].alpha, beta: rec.arms[arm].beta })
        .collect())
}

/// Steps where the chosen arm's draw fell outside its `rho` band.
pub fn rare_draw_steps(trace: &RunTrace, rho: f64) -> Result<Vec<RareDraw>> {
    let mut out = Vec::new();
    for rec in &trace.steps {
        let chosen = rec.chosen();
        let band = hdr_interval(chosen.alpha, chosen.beta, rho, DEFAULT_EPS)?;
        if is_draw_outside_hdr(chosen.draw, &band) {
            out.push(RareDraw { t: rec.t, arm: rec.chosen_arm, draw: chosen.draw, band });
        }
    }
    Ok(out)
}
