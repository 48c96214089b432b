//! Test-only oracles, independent of the crate's numeric code paths.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Unnormalized Beta density from `x` and `1 - x`, both supplied so that
/// points near either endpoint keep full precision.
fn beta_kernel(alpha: f64, beta: f64, x: f64, one_minus_x: f64) -> f64 {
    if x <= 0.0 || one_minus_x <= 0.0 {
        return 0.0;
    }
    ((alpha - 1.0) * x.ln() + (beta - 1.0) * one_minus_x.ln()).exp()
}

/// Tanh-sinh quadrature of the Beta kernel over `[lo, hi]`, halving the step
/// until two successive levels agree to `1e-15` relative.
fn tanh_sinh(alpha: f64, beta: f64, lo: f64, hi: f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let t_max = 4.0;
    let eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        // distances to each end, computed without cancellation
        let from_lo = (hi - lo) / (1.0 + (-2.0 * u).exp());
        let from_hi = (hi - lo) / (1.0 + (2.0 * u).exp());
        let x = lo + from_lo;
        let one_minus_x = if hi == 1.0 { from_hi } else { 1.0 - x };
        let x = if lo == 0.0 { from_lo } else { x };
        let cosh_u = u.cosh();
        let weight = half * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if !weight.is_finite() || weight == 0.0 {
            return 0.0;
        }
        weight * beta_kernel(alpha, beta, x, one_minus_x)
    };

    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut estimate = sum * h;

    for _ in 0..12 {
        h *= 0.5;
        // add only the new odd-indexed nodes
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= 1e-15 * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Integral of the kernel over `[lo, hi]`, split at the mode when it lies inside.
fn kernel_integral(alpha: f64, beta: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let mode = if alpha > 1.0 && beta > 1.0 { (alpha - 1.0) / (alpha + beta - 2.0) } else { -1.0 };
    if mode > lo && mode < hi {
        tanh_sinh(alpha, beta, lo, mode) + tanh_sinh(alpha, beta, mode, hi)
    } else {
        tanh_sinh(alpha, beta, lo, hi)
    }
}

/// `P(X <= x)` for `X ~ Beta(alpha, beta)` by numerical integration.
pub fn quadrature_beta_cdf(x: f64, alpha: f64, beta: f64) -> f64 {
    let total = kernel_integral(alpha, beta, 0.0, 1.0);
    kernel_integral(alpha, beta, 0.0, x) / total
}

/// `P(lo <= X <= hi)` by numerical integration.
pub fn quadrature_beta_mass(lo: f64, hi: f64, alpha: f64, beta: f64) -> f64 {
    let total = kernel_integral(alpha, beta, 0.0, 1.0);
    kernel_integral(alpha, beta, lo, hi) / total
}

/// Two-sided Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}
