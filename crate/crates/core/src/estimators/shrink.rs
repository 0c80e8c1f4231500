use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Root `λ ≥ 1` of `λ − ln λ − 1 = c`.
pub fn solve_threshold_constant(c: f64) -> Result<f64> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("threshold equation needs c ≥ 0, got {c}")));
    }
    if c == 0.0 {
        return Ok(1.0);
    }
    let g = |l: f64| l - l.ln() - 1.0 - c;
    // g(1) = −c < 0 and g(2c + 2) > 0 since x > ln 2x for x ≥ 1.
    let (mut lo, mut hi) = (1.0, 2.0 * c + 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let mut l = 0.5 * (lo + hi);
    for _ in 0..3 {
        let step = g(l) / (1.0 - 1.0 / l);
        if step.is_finite() {
            l -= step;
        }
    }
    Ok(l)
}

/// `λ_*`, the optional custom `λ` for `2D`, and the universal soft level `√(2 ln n / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConstants {
    pub lambda_star: f64,
    pub lambda_custom: Option<f64>,
    pub soft_level: f64,
}

impl ThresholdConstants {
    pub fn new(n: u64, d: Option<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("noise level n = {n} must be at least 2")));
        }
        let lambda_custom = match d {
            Some(d) if !(d > 0.0) => {
                return Err(Error::InvalidArgument(format!("D = {d} must be positive")))
            }
            Some(d) => Some(solve_threshold_constant(2.0 * d)?),
            None => None,
        };
        let nf = n as f64;
        Ok(Self {
            lambda_star: solve_threshold_constant(2.0)?,
            lambda_custom,
            soft_level: (2.0 * nf.ln() / nf).sqrt(),
        })
    }
}

pub fn soft_threshold(y: f64, t: f64) -> f64 {
    let m = y.abs() - t;
    if m > 0.0 {
        m.copysign(y)
    } else {
        0.0
    }
}

/// `(1 − λ L σ² / S²)_+`, zero for an all-zero block.
pub fn shrink_factor(sum_sq: f64, lambda: f64, l_eff: f64, sigma2: f64) -> f64 {
    if sum_sq > 0.0 {
        (1.0 - lambda * l_eff * sigma2 / sum_sq).max(0.0)
    } else {
        0.0
    }
}

pub fn james_stein_block(ys: &[f64], lambda: f64, l_eff: f64, sigma2: f64) -> Vec<f64> {
    let mut out = ys.to_vec();
    james_stein_in_place(&mut out, lambda, l_eff, sigma2);
    out
}

pub(crate) fn james_stein_in_place(ys: &mut [f64], lambda: f64, l_eff: f64, sigma2: f64) {
    let s2: f64 = ys.iter().map(|y| y * y).sum();
    let factor = shrink_factor(s2, lambda, l_eff, sigma2);
    for y in ys.iter_mut() {
        *y *= factor;
    }
}
