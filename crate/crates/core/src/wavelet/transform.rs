//! Periodized discrete wavelet transform between dyadic-grid samples and
//! coefficient trees.
//!
//! A sample vector `s` of length `N = 2^J` is read as the piecewise-constant
//! function equal to `s[m]` on the cell `[m/N, (m+1)/N)`. Its coefficients on
//! the level-`J` box functions are `s[m] / √N`, and the filter cascade maps
//! those onto an orthonormal system of `L²[0, 1]`. Consequently coefficient
//! energy equals `(1/N) Σ s[m]²`, the squared `L²` norm of the cell function.

use crate::error::{Error, Result};
use crate::wavelet::{CoefficientTree, WaveletSpec};

fn analysis_step(input: &[f64], spec: &WaveletSpec) -> (Vec<f64>, Vec<f64>) {
    let m = input.len();
    let half = m / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (i, (h, g)) in spec.low_pass.iter().zip(&spec.high_pass).enumerate() {
            let x = input[(2 * k + i) % m];
            a += h * x;
            d += g * x;
        }
        approx[k] = a;
        detail[k] = d;
    }
    (approx, detail)
}

fn synthesis_step(approx: &[f64], detail: &[f64], spec: &WaveletSpec) -> Vec<f64> {
    let m = approx.len() * 2;
    let mut out = vec![0.0; m];
    for k in 0..approx.len() {
        let (a, d) = (approx[k], detail[k]);
        for (i, (h, g)) in spec.low_pass.iter().zip(&spec.high_pass).enumerate() {
            out[(2 * k + i) % m] += h * a + g * d;
        }
    }
    out
}

/// log₂ of `len` if it is a power of two.
pub fn dyadic_level(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Forward transform of `2^max_level` samples down to the basis coarse level.
pub fn analyze(samples: &[f64], spec: &WaveletSpec, max_level: usize) -> Result<CoefficientTree> {
    let level = dyadic_level(samples.len())?;
    let coarse_size = 1usize << spec.coarse_level;
    if samples.len() < coarse_size {
        return Err(Error::TooShort {
            len: samples.len(),
            coarse: coarse_size,
        });
    }
    if level != max_level {
        return Err(Error::LevelMismatch(format!(
            "{} samples do not match max level {max_level}",
            samples.len()
        )));
    }
    let scale = 1.0 / (samples.len() as f64).sqrt();
    let mut approx: Vec<f64> = samples.iter().map(|s| s * scale).collect();
    let mut detail = Vec::with_capacity(max_level - spec.coarse_level);
    for _ in spec.coarse_level..max_level {
        let (a, d) = analysis_step(&approx, spec);
        detail.push(d);
        approx = a;
    }
    detail.reverse();
    Ok(CoefficientTree {
        coarse_level: spec.coarse_level,
        max_level,
        coarse: approx,
        detail,
    })
}

/// Scaling coefficients at `level` (between `j₀` and `max_level`) implied by the tree.
pub fn scaling_coefficients(
    tree: &CoefficientTree,
    spec: &WaveletSpec,
    level: usize,
) -> Result<Vec<f64>> {
    if tree.coarse_level != spec.coarse_level {
        return Err(Error::LevelMismatch(format!(
            "tree coarse level {} vs basis coarse level {}",
            tree.coarse_level, spec.coarse_level
        )));
    }
    if level < tree.coarse_level || level > tree.max_level {
        return Err(Error::LevelMismatch(format!(
            "level {level} outside [{}, {}]",
            tree.coarse_level, tree.max_level
        )));
    }
    tree.validate()?;
    let mut approx = tree.coarse.clone();
    for (_, detail) in tree.levels().take(level - tree.coarse_level) {
        approx = synthesis_step(&approx, detail, spec);
    }
    Ok(approx)
}

/// Inverse of [`analyze`]: returns `2^max_level` samples.
pub fn synthesize(tree: &CoefficientTree, spec: &WaveletSpec) -> Result<Vec<f64>> {
    let approx = scaling_coefficients(tree, spec, tree.max_level)?;
    let scale = (approx.len() as f64).sqrt();
    Ok(approx.into_iter().map(|a| a * scale).collect())
}

/// Discrete squared `L²` norm `(1/N) Σ s²` of a cell function.
pub fn grid_energy(samples: &[f64]) -> f64 {
    samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64
}
