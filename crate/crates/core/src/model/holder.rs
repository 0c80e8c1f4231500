use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Safety factor applied to grid seminorms when claiming class membership.
pub const MEMBERSHIP_SLACK: f64 = 1e-3;

/// `F(α, M)`: functions whose `k`-th derivative is `(α - k)`-Hölder with constant `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderClass {
    pub alpha: f64,
    pub bound: f64,
}

impl HolderClass {
    pub fn new(alpha: f64, bound: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("smoothness {alpha} must be positive")));
        }
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::InvalidArgument(format!("Hölder constant {bound} must be positive")));
        }
        Ok(Self { alpha, bound })
    }

    /// Greatest integer strictly below `α`.
    pub fn k(&self) -> usize {
        derivative_order(self.alpha)
    }

    /// The rate exponent `2α/(1+2α)`.
    pub fn rate_exponent(&self) -> f64 {
        2.0 * self.alpha / (1.0 + 2.0 * self.alpha)
    }
}

pub fn derivative_order(alpha: f64) -> usize {
    (alpha.ceil() as usize).saturating_sub(1)
}

/// Grid seminorm: a lower bound on the true seminorm at this spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub seminorm: f64,
    pub spacing: f64,
}

impl HolderEstimate {
    pub fn within(&self, bound: f64) -> bool {
        self.seminorm <= bound * (1.0 + MEMBERSHIP_SLACK)
    }
}

fn finite_difference(samples: &[f64], spacing: f64, order: usize) -> Vec<f64> {
    let mut d = samples.to_vec();
    for _ in 0..order {
        d = d.windows(2).map(|w| (w[1] - w[0]) / spacing).collect();
    }
    d
}

/// `sup |Δᵏf(x) − Δᵏf(y)| / |x − y|^{α−k}` over grid pairs, with `Δᵏ` the
/// normalized forward difference.
pub fn holder_seminorm(samples: &[f64], spacing: f64, alpha: f64) -> Result<HolderEstimate> {
    holder_seminorm_with(samples, spacing, alpha, Execution::Parallel)
}

pub fn holder_seminorm_with(
    samples: &[f64],
    spacing: f64,
    alpha: f64,
    exec: Execution,
) -> Result<HolderEstimate> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("smoothness {alpha} must be positive")));
    }
    if !(spacing > 0.0) {
        return Err(Error::InvalidArgument("grid spacing must be positive".into()));
    }
    let k = derivative_order(alpha);
    if samples.len() < k + 2 {
        return Err(Error::InvalidArgument(format!(
            "{} samples cannot resolve derivative order {k}",
            samples.len()
        )));
    }
    let d = finite_difference(samples, spacing, k);
    let exponent = alpha - k as f64;
    let seminorm = if exponent == 1.0 {
        // A difference quotient over a long span averages the adjacent ones.
        d.windows(2)
            .map(|w| (w[1] - w[0]).abs() / spacing)
            .fold(0.0, f64::max)
    } else {
        all_pairs(&d, spacing, exponent, exec)
    };
    Ok(HolderEstimate { seminorm, spacing })
}

fn all_pairs(d: &[f64], spacing: f64, exponent: f64, exec: Execution) -> f64 {
    // Powers depend only on the index gap.
    let denom: Vec<f64> = (0..d.len()).map(|g| (g as f64 * spacing).powf(exponent)).collect();
    exec.map_indexed(d.len(), |i| {
        let di = d[i];
        d[i + 1..]
            .iter()
            .enumerate()
            .map(|(g, dj)| (dj - di).abs() / denom[g + 1])
            .fold(0.0, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..=n).map(|i| f(i as f64 / n as f64)).collect()
    }

    #[test]
    fn class_k_is_strictly_below_alpha() {
        assert_eq!(HolderClass::new(0.5, 1.0).unwrap().k(), 0);
        assert_eq!(HolderClass::new(1.0, 1.0).unwrap().k(), 0);
        assert_eq!(HolderClass::new(1.5, 1.0).unwrap().k(), 1);
        assert_eq!(HolderClass::new(2.0, 1.0).unwrap().k(), 1);
        assert!(HolderClass::new(0.0, 1.0).is_err());
        assert!(HolderClass::new(1.0, -1.0).is_err());
    }

    #[test]
    fn constant_has_zero_seminorm() {
        let s = vec![3.0; 100];
        assert_eq!(holder_seminorm(&s, 0.01, 0.7).unwrap().seminorm, 0.0);
        assert_eq!(holder_seminorm(&s, 0.01, 1.5).unwrap().seminorm, 0.0);
    }

    #[test]
    fn identity_has_unit_seminorm() {
        let s = grid(512, |x| x);
        for alpha in [0.3, 0.5, 0.9, 1.0] {
            let est = holder_seminorm(&s, 1.0 / 512.0, alpha).unwrap();
            assert!((est.seminorm - 1.0).abs() < 1e-12, "α={alpha}: {}", est.seminorm);
        }
    }

    #[test]
    fn power_function_attains_its_constant() {
        let m = 2.5;
        for alpha in [0.25, 0.5, 0.75] {
            let s = grid(1024, |x| m * x.powf(alpha));
            let est = holder_seminorm(&s, 1.0 / 1024.0, alpha).unwrap();
            assert!((est.seminorm - m).abs() < 1e-9, "α={alpha}: {}", est.seminorm);
        }
    }

    #[test]
    fn second_order_uses_first_differences() {
        // f = x²/2 has f' = x, so its Lipschitz(f') constant is 1.
        let s = grid(400, |x| x * x / 2.0);
        let est = holder_seminorm(&s, 1.0 / 400.0, 2.0).unwrap();
        assert!((est.seminorm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lipschitz_fast_path_matches_all_pairs() {
        let s = grid(300, |x| (7.0 * x).sin() + (x - 0.4).abs());
        let d = finite_difference(&s, 1.0 / 300.0, 0);
        let brute = all_pairs(&d, 1.0 / 300.0, 1.0, Execution::Sequential);
        let fast = holder_seminorm(&s, 1.0 / 300.0, 1.0).unwrap().seminorm;
        assert!((brute - fast).abs() <= 1e-12 * fast);
    }

    #[test]
    fn too_few_samples() {
        assert!(holder_seminorm(&[1.0, 2.0], 0.5, 1.5).is_err());
    }
}
