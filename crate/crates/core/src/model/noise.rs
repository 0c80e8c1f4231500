//! Exact Gaussian sequence-model sampler.
//!
//! Generator: ChaCha8 (`rand_chacha` 0.9) seeded with `seed_from_u64(seed)`
//! and switched to stream `stream` (replication index). Normals come from the
//! Box–Muller transform on pairs of 64-bit outputs:
//!
//! ```text
//! u1 = ((a >> 11) + 1) · 2^-53        ∈ (0, 1]
//! u2 =  (b >> 11)      · 2^-53        ∈ [0, 1)
//! z0 = √(-2 ln u1) · cos(2π u2),  z1 = √(-2 ln u1) · sin(2π u2)
//! ```
//!
//! Draws are consumed coarse block first, then level by level in position
//! order. Bit-for-bit reproduction across platforms additionally requires the
//! same `ln`/`sin`/`cos` implementation.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wavelet::CoefficientTree;

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Standard normal stream for one `(seed, stream)` pair.
pub struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * TWO_POW_NEG_53;
        let u2 = (self.rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53;
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(r * angle.sin());
        r * angle.cos()
    }

    /// Uniform on `[0, 1)` from the same generator.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }
}

/// Noisy coefficients `ỹ = ξ + n^{-1/2} z̃`, `y = θ + n^{-1/2} z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedSequence {
    pub noise_level: u64,
    pub seed: u64,
    pub stream: u64,
    pub tree: CoefficientTree,
}

impl ObservedSequence {
    pub fn coarse_obs(&self) -> &[f64] {
        &self.tree.coarse
    }

    pub fn detail_obs(&self, j: usize) -> Option<&[f64]> {
        self.tree.level(j)
    }

    /// Noise variance `1/n`.
    pub fn sigma2(&self) -> f64 {
        1.0 / self.noise_level as f64
    }

    /// Wraps noiseless coefficients as an observation (useful for oracles).
    pub fn noiseless(tree: CoefficientTree, noise_level: u64) -> Self {
        Self {
            noise_level,
            seed: 0,
            stream: 0,
            tree,
        }
    }
}

pub fn sample_observation(tree: &CoefficientTree, n: u64, seed: u64) -> Result<ObservedSequence> {
    sample_observation_stream(tree, n, seed, 0)
}

/// Replication `stream` of the observation at noise level `n`.
pub fn sample_observation_stream(
    tree: &CoefficientTree,
    n: u64,
    seed: u64,
    stream: u64,
) -> Result<ObservedSequence> {
    if n < 1 {
        return Err(Error::InvalidArgument("noise level n must be at least 1".into()));
    }
    let sigma = 1.0 / (n as f64).sqrt();
    let mut normals = NormalStream::new(seed, stream);
    let mut obs = tree.clone();
    for v in obs.coarse.iter_mut() {
        *v += sigma * normals.next_normal();
    }
    for level in obs.detail.iter_mut() {
        for v in level.iter_mut() {
            *v += sigma * normals.next_normal();
        }
    }
    Ok(ObservedSequence {
        noise_level: n,
        seed,
        stream,
        tree: obs,
    })
}
