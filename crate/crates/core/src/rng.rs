//! Deterministic, hierarchically derived random streams and the samplers
//! built on top of them.
//!
//! Every simulation cell owns one [`RngStream`], derived from the master seed
//! and the cell coordinates `(scenario_index, policy_index, replication_index)`.
//! Nothing here touches a global generator, so results do not depend on how
//! cells are scheduled across threads.
//!
//! # Stream derivation (frozen)
//!
//! ```text
//! mix64(z):
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!     z ^ (z >> 31)
//!
//! key = mix64(seed        ^ 0x6A09E667F3BCC909)
//! key = mix64(key ^ scenario_index    * 0x9E3779B97F4A7C15)
//! key = mix64(key ^ policy_index      * 0xBF58476D1CE4E5B9)
//! key = mix64(key ^ replication_index * 0x94D049BB133111EB)
//! ```
//!
//! All arithmetic wraps modulo 2^64. Each step is a bijection in its index, so
//! tuples that differ in exactly one coordinate always get different keys.
//!
//! The `n`-th 64-bit output (n = 1, 2, ...) is
//! `mix64(key + n * 0x9E3779B97F4A7C15)`, i.e. SplitMix64 started at `key`.
//!
//! # Samplers (frozen consumption order)
//!
//! * uniform: `(next_u64 >> 11) * 2^-53`, in `[0, 1)`; one output.
//! * bernoulli(p): `1` iff `uniform < p`; one uniform.
//! * standard normal: Box-Muller cosine branch,
//!   `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`; two uniforms, second value discarded.
//! * gamma(a >= 1): Marsaglia-Tsang with `d = a - 1/3`, `c = 1/sqrt(9d)`; each
//!   attempt draws one normal `x`, then (only if `v = (1 + c x)^3 > 0`) one
//!   uniform `u`; accept if `u < 1 - 0.0331 x^4` or
//!   `ln(u) < x^2/2 + d (1 - v + ln v)`. Returns `d v`.
//! * gamma(a < 1): `gamma(a + 1) * (1 - u)^(1/a)`, the gamma draw first.
//! * beta(a, b): `x / (x + y)` with `x ~ gamma(a)` drawn before `y ~ gamma(b)`,
//!   clamped to `[2^-53, 1 - 2^-53]`.

use crate::error::{BanditError, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SEED_SALT: u64 = 0x6A09_E667_F3BC_C909;
const SCENARIO_MUL: u64 = 0x9E37_79B9_7F4A_7C15;
const POLICY_MUL: u64 = 0xBF58_476D_1CE4_E5B9;
const REPLICATION_MUL: u64 = 0x94D0_49BB_1331_11EB;

/// 2^-53: spacing of uniform variates.
const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

/// Smallest value a Beta draw may take; the largest is `1 - BETA_CLAMP`.
pub const BETA_CLAMP: f64 = UNIT;

/// Root of every stream derivation. Any value is legal, including 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MasterSeed(pub u64);

impl From<u64> for MasterSeed {
    fn from(value: u64) -> Self {
        MasterSeed(value)
    }
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based random stream for one `(scenario, policy, replication)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    key: u64,
    position: u64,
}

/// Derive the stream for one simulation cell. Pure and thread-safe.
pub fn derive_stream(
    seed: MasterSeed,
    scenario_index: u64,
    policy_index: u64,
    replication_index: u64,
) -> RngStream {
    let mut key = mix64(seed.0 ^ SEED_SALT);
    key = mix64(key ^ scenario_index.wrapping_mul(SCENARIO_MUL));
    key = mix64(key ^ policy_index.wrapping_mul(POLICY_MUL));
    key = mix64(key ^ replication_index.wrapping_mul(REPLICATION_MUL));
    RngStream { key, position: 0 }
}

impl RngStream {
    /// Number of 64-bit outputs consumed so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.position = self.position.wrapping_add(1);
        mix64(
            self.key
                .wrapping_add(self.position.wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform variate in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIT
    }

    /// Uniform index in `0..n`; consumes one uniform. `n` must be nonzero.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_uniform() * n as f64) as usize).min(n - 1)
    }

    pub fn next_bernoulli(&mut self, p: f64) -> Result<u8> {
        if !(0.0..=1.0).contains(&p) {
            return Err(BanditError::OutOfRangeProbability(p));
        }
        Ok(u8::from(self.next_uniform() < p))
    }

    pub fn next_standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_uniform();
        let u2 = self.next_uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// One `Gamma(shape, 1)` variate.
    pub fn next_gamma(&mut self, shape: f64) -> Result<f64> {
        check_shape(shape)?;
        Ok(self.gamma_unchecked(shape))
    }

    /// One `Beta(alpha, beta)` variate, clamped away from exact 0 and 1.
    pub fn next_beta(&mut self, alpha: f64, beta: f64) -> Result<f64> {
        check_shape(alpha)?;
        check_shape(beta)?;
        Ok(self.beta_unchecked(alpha, beta))
    }

    /// Beta draw for shapes already known to be positive and finite.
    pub(crate) fn beta_unchecked(&mut self, alpha: f64, beta: f64) -> f64 {
        let x = self.gamma_unchecked(alpha);
        let y = self.gamma_unchecked(beta);
        let ratio = x / (x + y);
        // x + y == 0 only when both gammas underflow
        let ratio = if ratio.is_nan() { 0.5 } else { ratio };
        ratio.clamp(BETA_CLAMP, 1.0 - BETA_CLAMP)
    }

    fn gamma_unchecked(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            let boosted = self.marsaglia_tsang(shape + 1.0);
            let u = 1.0 - self.next_uniform();
            return boosted * u.powf(1.0 / shape);
        }
        self.marsaglia_tsang(shape)
    }

    fn marsaglia_tsang(&mut self, shape: f64) -> f64 {
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.next_standard_normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.next_uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }
}

fn check_shape(shape: f64) -> Result<()> {
    if shape > 0.0 && shape.is_finite() {
        Ok(())
    } else {
        Err(BanditError::InvalidShapeParameter(shape))
    }
}
