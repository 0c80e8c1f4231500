use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::plan::plan_levels;
use crate::estimators::rules::{
    block_js, hybrid_estimate, local_constant_estimate, local_constant_level, soft_estimate,
    superefficient_estimate, superefficient_level,
};
use crate::estimators::shrink::ThresholdConstants;
use crate::model::ObservedSequence;
use crate::risk::NeighborhoodSpec;
use crate::wavelet::{CoefficientTree, WaveletSpec};

pub const ESTIMATORS: &[(&str, &str)] = &[
    ("identity", "returns the true coefficient tree (zero-risk oracle)"),
    ("zero", "returns the zero function (bias-only reference)"),
    ("soft", "soft thresholding of every detail at sqrt(2 ln n / n)"),
    ("blockjs", "level-wise James-Stein over blocks of ceil(ln n), lambda = 4.50524"),
    ("hybrid", "soft / vertical H* block / horizontal blocks; BlockJS when c_n <= ln n / n"),
    ("superefficient", "one James-Stein block through level J', lambda solving lambda - ln lambda - 1 = 2D; param d"),
    ("local_constant", "soft-thresholded scaling coefficient over x0 at level j_n, B_n = n^b; param b_exponent"),
];

/// An estimator by name with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum EstimatorSpec {
    Identity,
    Zero,
    Soft,
    Blockjs,
    Hybrid,
    Superefficient { d: f64 },
    LocalConstant { b_exponent: f64 },
}

/// Inputs an estimator may need beyond the observation.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorContext<'a> {
    pub spec: &'a WaveletSpec,
    pub nb: &'a NeighborhoodSpec,
    pub alpha: f64,
    /// Consulted only by the identity oracle.
    pub truth: &'a CoefficientTree,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Estimate {
    Tree(CoefficientTree),
    /// A constant over the neighborhood.
    Constant(f64),
}

impl EstimatorSpec {
    pub fn parse(name: &str, d: Option<f64>, b_exponent: Option<f64>) -> Result<Self> {
        Ok(match name {
            "identity" => Self::Identity,
            "zero" => Self::Zero,
            "soft" => Self::Soft,
            "blockjs" => Self::Blockjs,
            "hybrid" => Self::Hybrid,
            "superefficient" => Self::Superefficient { d: d.unwrap_or(0.5) },
            "local_constant" => Self::LocalConstant {
                b_exponent: b_exponent.unwrap_or(0.5),
            },
            other => return Err(Error::UnknownEstimator(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Zero => "zero",
            Self::Soft => "soft",
            Self::Blockjs => "blockjs",
            Self::Hybrid => "hybrid",
            Self::Superefficient { .. } => "superefficient",
            Self::LocalConstant { .. } => "local_constant",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Superefficient { d } if !(*d > 0.0) => {
                Err(Error::InvalidArgument(format!("superefficient D = {d} must be positive")))
            }
            Self::LocalConstant { b_exponent } if !(*b_exponent > 0.0 && *b_exponent < 1.0) => Err(
                Error::InvalidArgument(format!("local_constant exponent b = {b_exponent} must lie in (0, 1)")),
            ),
            _ => Ok(()),
        }
    }

    /// `B_n = n^b` for the local-constant rule.
    pub fn b_n(&self, n: u64) -> Option<f64> {
        match self {
            Self::LocalConstant { b_exponent } => Some((n as f64).powf(*b_exponent)),
            _ => None,
        }
    }

    /// The hybrid rule becomes BlockJS when `c_n ≤ ln n / n`.
    pub fn resolve(&self, n: u64, nb: &NeighborhoodSpec) -> Self {
        if *self == Self::Hybrid && (nb.c_n <= (n as f64).ln() / n as f64) {
            log::info!("hybrid -> blockjs at n = {n}: c_n = {} <= ln n / n", nb.c_n);
            return Self::Blockjs;
        }
        self.clone()
    }

    /// Finest observed level the estimator reads, capped by the truth depth.
    pub fn required_depth(&self, n: u64, ctx: &EstimatorContext) -> Result<usize> {
        let j0 = ctx.truth.coarse_level;
        let j_max = ctx.truth.max_level;
        let depth = match self {
            Self::Identity | Self::Zero => j0,
            Self::Soft | Self::Blockjs | Self::Hybrid => plan_levels(n, 0.5, None, j0)?.j_dividing,
            Self::Superefficient { .. } => {
                let jp = superefficient_level(n, ctx.alpha);
                if jp < j0 as i64 {
                    return Err(Error::Precondition(format!(
                        "J′ = {jp} is below the coarse level {j0} at n = {n}"
                    )));
                }
                let depth = jp as usize + 1;
                if depth > j_max {
                    return Err(Error::LevelMismatch(format!("J′ = {jp} needs J_max > {jp}")));
                }
                depth
            }
            Self::LocalConstant { .. } => {
                let jn = local_constant_level(n, self.b_n(n).unwrap_or(2.0), ctx.alpha);
                if jn < j0 as i64 || jn as usize > j_max {
                    return Err(Error::Precondition(format!("j_n = {jn} outside [{j0}, {j_max}]")));
                }
                jn as usize
            }
        };
        Ok(depth.clamp(j0, j_max))
    }

    pub fn estimate(&self, obs: &ObservedSequence, ctx: &EstimatorContext) -> Result<Estimate> {
        let n = obs.noise_level;
        Ok(match self.resolve(n, ctx.nb) {
            Self::Identity => Estimate::Tree(ctx.truth.clone()),
            Self::Zero => Estimate::Tree(CoefficientTree::zeros(obs.tree.coarse_level, obs.tree.max_level)),
            Self::Soft => Estimate::Tree(soft_estimate(obs, ThresholdConstants::new(n, None)?.soft_level)?),
            Self::Blockjs => Estimate::Tree(block_js(obs, &ThresholdConstants::new(n, None)?)?),
            Self::Hybrid => Estimate::Tree(hybrid_estimate(
                obs,
                ctx.nb,
                &ThresholdConstants::new(n, None)?,
                ctx.spec,
            )?),
            Self::Superefficient { d } => Estimate::Tree(superefficient_estimate(obs, d, ctx.alpha)?),
            est @ Self::LocalConstant { .. } => {
                let b_n = est.b_n(n).unwrap_or(2.0);
                Estimate::Constant(local_constant_estimate(obs, ctx.nb, b_n, ctx.alpha, ctx.spec)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for (name, _) in ESTIMATORS {
            let e = EstimatorSpec::parse(name, None, None).unwrap();
            assert_eq!(e.name(), *name);
            e.validate().unwrap();
        }
        assert!(EstimatorSpec::parse("median", None, None).is_err());
        assert!(EstimatorSpec::Superefficient { d: 0.0 }.validate().is_err());
    }

    #[test]
    fn hybrid_switches_in_blockjs_regime() {
        let n = 1u64 << 10;
        let narrow = NeighborhoodSpec::new(0.5, 0.5 * (n as f64).ln() / n as f64).unwrap();
        assert_eq!(EstimatorSpec::Hybrid.resolve(n, &narrow), EstimatorSpec::Blockjs);
        let wide = NeighborhoodSpec::new(0.5, 0.1).unwrap();
        assert_eq!(EstimatorSpec::Hybrid.resolve(n, &wide), EstimatorSpec::Hybrid);
    }

    #[test]
    fn serde_tagging() {
        let e: EstimatorSpec = serde_json::from_str(r#"{"name":"superefficient","d":0.5}"#).unwrap();
        assert_eq!(e, EstimatorSpec::Superefficient { d: 0.5 });
    }
}
