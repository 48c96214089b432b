//! Seeded random source with a pinned variate algorithm.
//!
//! Reproducible traces need more than a fixed seed: the mapping from raw
//! 64-bit outputs to Beta variates is part of the replay contract, so every
//! transform below is implemented here rather than delegated to a
//! distribution crate whose algorithm could change between versions.
//!
//! * stream: xoshiro256++ seeded through SplitMix64
//! * uniforms: top 53 bits of one output
//! * normals: Box–Muller, cosine branch only (two uniforms per normal)
//! * gamma: Marsaglia–Tsang squeeze; shapes below 1 use the `U^(1/a)` boost
//! * beta: `X / (X + Y)` for independent gammas, evaluated in log space

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Identifier written to trace metadata for traces produced with [`SimRng`].
pub const RNG_ALGORITHM: &str =
    "xoshiro256++/splitmix64-seed;beta=gamma-ratio(marsaglia-tsang,box-muller)";

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct SimRng {
    inner: Xoshiro256PlusPlus,
}

impl SimRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * TWO_POW_NEG_53
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Natural log of a `Gamma(shape, 1)` variate.
    ///
    /// Working in log space keeps shapes near the epsilon floor (1e-9) usable:
    /// the boost factor `U^(1/shape)` underflows to zero there, its log does not.
    pub fn ln_gamma_variate(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0 && shape.is_finite());
        if shape < 1.0 {
            let ln_boosted = self.ln_gamma_variate(shape + 1.0);
            let u = self.uniform_open();
            return ln_boosted + u.ln() / shape;
        }

        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.standard_normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.uniform_open();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d.ln() + v.ln();
            }
        }
    }

    /// One `Beta(alpha, beta)` variate. Consumes the alpha-side gamma first.
    pub fn beta(&mut self, alpha: f64, beta: f64) -> f64 {
        let ln_x = self.ln_gamma_variate(alpha);
        let ln_y = self.ln_gamma_variate(beta);
        // x / (x + y) = 1 / (1 + exp(ln_y - ln_x))
        1.0 / (1.0 + (ln_y - ln_x).exp())
    }

    /// Bernoulli trial with success probability `p`; `p = 1` always succeeds.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}
