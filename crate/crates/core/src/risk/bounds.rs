//! Closed-form risk bounds and Gaussian moments used as oracles.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Which block-risk bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// `min{Σθ², λLσ²} + 2λ e^{−(λ − ln λ − 1)L/2} σ²`.
    GeneralLambda,
    /// `min{Σθ², λLσ²} + 2λ e^{−L} σ²`.
    UnitExponent,
    /// Per coefficient with `|θ_i| ≤ c`: `8c² + 2λ e^{−L} σ²`.
    BoundedMeans { c: Option<f64> },
}

pub fn oracle_bound(theta: &[f64], lambda: f64, l: f64, sigma2: f64, variant: BoundVariant) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} must be at least 1")));
    }
    let energy: f64 = theta.iter().map(|t| t * t).sum();
    let oracle = energy.min(lambda * l * sigma2);
    Ok(match variant {
        BoundVariant::GeneralLambda => {
            oracle + 2.0 * lambda * (-0.5 * (lambda - lambda.ln() - 1.0) * l).exp() * sigma2
        }
        BoundVariant::UnitExponent => oracle + 2.0 * lambda * (-l).exp() * sigma2,
        BoundVariant::BoundedMeans { c } => {
            let c = c.ok_or_else(|| Error::InvalidArgument("bounded-means variant needs c".into()))?;
            8.0 * c * c + 2.0 * lambda * (-l).exp() * sigma2
        }
    })
}

/// Standard normal upper tail `P(Z > x)`.
pub fn normal_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

pub fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `E y² 1{|y| > c}` for `y ~ N(θ, 1)`.
pub fn truncated_second_moment(theta: f64, c: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(Error::InvalidArgument(format!("truncation c = {c} must be nonnegative")));
    }
    // ∫_a^∞ (u + θ)² φ(u) du = (1 + θ²) Q(a) + (a + 2θ) φ(a), applied to both tails.
    let upper = |t: f64| {
        let a = c - t;
        (1.0 + t * t) * normal_tail(a) + (a + 2.0 * t) * normal_density(a)
    };
    Ok(upper(theta) + upper(-theta))
}

/// `P(χ²_k > x)`.
pub fn chi_square_tail(k: f64, x: f64) -> Result<f64> {
    let dist = ChiSquared::new(k).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(dist.sf(x))
}
