//! Beta CDF and mean-symmetric highest-density bands.
//!
//! The band for `Beta(alpha, beta)` at level `rho` is `[mu - d, mu + d]`
//! (clipped to `[0, 1]`), where `d` is found by bisection on
//! `F(mu + d) - F(mu - d) = rho` over `d in [0, min(mu, 1 - mu)]`. The
//! returned endpoints come from the upper bisection bracket, so the enclosed
//! mass approaches `rho` from above.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::trace::RunTrace;

pub const DEFAULT_RHO: f64 = 0.5;
pub const DEFAULT_EPS: f64 = 1e-8;

/// Bands whose enclosed mass misses `rho` by more than this are flagged truncated.
pub const MASS_TOLERANCE: f64 = 1e-6;

const CF_MAX_ITER: usize = 10_000;
const CF_EPS: f64 = 1e-15;
const CF_TINY: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HdrBand {
    pub rho: f64,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
    pub achieved_mass: f64,
    /// The symmetric construction could not enclose mass `rho`.
    pub truncated: bool,
    /// Non-positive parameters or a mean at 0 or 1; `a = b = mu`.
    pub degenerate: bool,
}

impl HdrBand {
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }
}

/// A band tagged with the step it describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedBand {
    pub t: usize,
    #[serde(flatten)]
    pub band: HdrBand,
}

/// Regularized incomplete beta function `I_x(alpha, beta)`.
pub fn beta_cdf(x: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0) {
        return Err(Error::domain(format!(
            "beta_cdf needs positive finite parameters, got ({alpha}, {beta})"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("beta_cdf argument {x} outside [0, 1]")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }

    // the continued fraction converges fastest below the mean-ish switch point
    let value = if x > (alpha + 1.0) / (alpha + beta + 2.0) {
        1.0 - incbeta_cf(beta, alpha, 1.0 - x)?
    } else {
        incbeta_cf(alpha, beta, x)?
    };
    Ok(value.clamp(0.0, 1.0))
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `I_x(a, b)` from its continued fraction, modified Lentz evaluation.
fn incbeta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b);
    let front = ln_front.exp() / a;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + even * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + even / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + odd * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + odd / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < CF_EPS {
            return Ok(front * h);
        }
    }
    Err(Error::Convergence("incomplete beta continued fraction"))
}

fn degenerate_band(mu: f64, rho: f64) -> HdrBand {
    HdrBand { rho, mu, a: mu, b: mu, achieved_mass: 0.0, truncated: false, degenerate: true }
}

/// Mean used for degenerate parameters: the ratio clamped to `[0, 1]`, or 0.5 when undefined.
fn degenerate_mean(alpha: f64, beta: f64) -> f64 {
    let mu = alpha / (alpha + beta);
    if mu.is_finite() {
        mu.clamp(0.0, 1.0)
    } else {
        0.5
    }
}

/// Mean-symmetric `rho`-level band for `Beta(alpha, beta)`, bisected to width `eps`.
pub fn hdr_interval(alpha: f64, beta: f64, rho: f64, eps: f64) -> Result<HdrBand> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("rho must lie in (0, 1), got {rho}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0) {
        return Ok(degenerate_band(degenerate_mean(alpha, beta), rho));
    }
    let mu = alpha / (alpha + beta);
    if mu <= 0.0 || mu >= 1.0 {
        return Ok(degenerate_band(mu.clamp(0.0, 1.0), rho));
    }

    let bounds = |delta: f64| ((mu - delta).max(0.0), (mu + delta).min(1.0));
    let mass = |delta: f64| -> Result<f64> {
        let (lo, hi) = bounds(delta);
        Ok(beta_cdf(hi, alpha, beta)? - beta_cdf(lo, alpha, beta)?)
    };

    let mut delta_min = 0.0;
    let mut delta_max = mu.min(1.0 - mu);

    let widest = mass(delta_max)?;
    if widest < rho {
        let (a, b) = bounds(delta_max);
        return Ok(HdrBand { rho, mu, a, b, achieved_mass: widest, truncated: true, degenerate: false });
    }

    while delta_max - delta_min > eps {
        let delta = 0.5 * (delta_min + delta_max);
        if mass(delta)? > rho {
            delta_max = delta;
        } else {
            delta_min = delta;
        }
    }

    let (a, b) = bounds(delta_max);
    let achieved_mass = mass(delta_max)?;
    Ok(HdrBand {
        rho,
        mu,
        a,
        b,
        achieved_mass,
        // a near-atomic CDF can jump past rho inside one eps step
        truncated: (achieved_mass - rho).abs() > MASS_TOLERANCE,
        degenerate: false,
    })
}

/// One band per arm per step from the recorded post-discount parameters,
/// indexed `[arm][t]`.
pub fn hdr_series(trace: &RunTrace, rho: f64, eps: f64) -> Result<Vec<Vec<HdrBand>>> {
    (0..trace.num_arms())
        .map(|arm| {
            trace
                .steps
                .iter()
                .map(|rec| {
                    let state = rec
                        .arms
                        .get(arm)
                        .ok_or_else(|| Error::domain(format!("t={}: no entry for arm {arm}", rec.t)))?;
                    hdr_interval(state.alpha, state.beta, rho, eps)
                })
                .collect()
        })
        .collect()
}

/// Bands are closed: a draw on either endpoint is inside.
pub fn is_draw_outside_hdr(draw: f64, band: &HdrBand) -> bool {
    draw < band.a || draw > band.b
}
