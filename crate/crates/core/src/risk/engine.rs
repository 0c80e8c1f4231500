//! Monte Carlo neighborhood and weighted risk.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{Estimate, EstimatorContext, EstimatorSpec};
use crate::exec::Execution;
use crate::model::{sample_observation_stream, TestFunction};
use crate::risk::neighborhood::{CellWeights, NeighborhoodSpec};
use crate::wavelet::{synthesize, WaveletSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub estimator: String,
    pub n: u64,
    pub reps: usize,
    pub mean: f64,
    pub stderr: f64,
    pub seed: u64,
}

impl RiskReport {
    /// Mean and standard error (sample standard deviation over `√reps`),
    /// summed in index order.
    pub fn from_losses(estimator: &str, n: u64, seed: u64, losses: &[f64]) -> Result<Self> {
        let reps = losses.len();
        if reps < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 replications, got {reps}")));
        }
        let mean = losses.iter().sum::<f64>() / reps as f64;
        let ss: f64 = losses.iter().map(|l| (l - mean).powi(2)).sum();
        let stderr = (ss / (reps - 1) as f64 / reps as f64).sqrt();
        Ok(Self {
            estimator: estimator.to_string(),
            n,
            reps,
            mean,
            stderr,
            seed,
        })
    }
}

/// One risk evaluation: estimator, truth, neighborhood and Monte Carlo settings.
#[derive(Debug, Clone)]
pub struct RiskJob<'a> {
    pub estimator: &'a EstimatorSpec,
    pub function: &'a TestFunction,
    pub spec: &'a WaveletSpec,
    pub nb: &'a NeighborhoodSpec,
    pub alpha: f64,
    pub n: u64,
    pub reps: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl<'a> RiskJob<'a> {
    pub fn new(
        estimator: &'a EstimatorSpec,
        function: &'a TestFunction,
        spec: &'a WaveletSpec,
        nb: &'a NeighborhoodSpec,
        n: u64,
        reps: usize,
        seed: u64,
    ) -> Self {
        Self {
            estimator,
            function,
            spec,
            nb,
            alpha: function.declared_class.alpha,
            n,
            reps,
            seed,
            exec: Execution::default(),
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Per-replication losses `∫ W_n (f̂ − f)²` in replication order.
    pub fn losses(&self, weights: &CellWeights) -> Result<Vec<f64>> {
        self.estimator.validate()?;
        if self.reps < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 replications, got {}", self.reps)));
        }
        if self.function.basis != self.spec.name || self.function.true_tree.coarse_level != self.spec.coarse_level {
            return Err(Error::LevelMismatch(format!(
                "function `{}` was analyzed with `{}` at j₀ = {}",
                self.function.name, self.function.basis, self.function.true_tree.coarse_level
            )));
        }
        let truth = &self.function.true_tree;
        let ctx = EstimatorContext {
            spec: self.spec,
            nb: self.nb,
            alpha: self.alpha,
            truth,
        };
        let estimator = self.estimator.resolve(self.n, self.nb);
        let depth = estimator.required_depth(self.n, &ctx)?;
        let observed_truth = truth.truncated(depth);
        let truth_samples = synthesize(truth, self.spec)?;

        let results = self.exec.map_indexed(self.reps, |rep| -> Result<f64> {
            let obs = sample_observation_stream(&observed_truth, self.n, self.seed, rep as u64)?;
            let error = match estimator.estimate(&obs, &ctx)? {
                Estimate::Tree(tree) => synthesize(&tree.difference(truth)?, self.spec)?,
                Estimate::Constant(delta) => truth_samples.iter().map(|f| delta - f).collect(),
            };
            Ok(weights.weighted_energy(&error))
        });
        results.into_iter().collect()
    }

    fn report(&self, weights: &CellWeights) -> Result<RiskReport> {
        let losses = self.losses(weights)?;
        let name = self.estimator.resolve(self.n, self.nb).name();
        RiskReport::from_losses(name, self.n, self.seed, &losses)
    }

    /// `(1/2c_n) E ∫_{x₀−c_n}^{x₀+c_n} (f̂ − f)²`; any kernel on `nb` is ignored.
    pub fn neighborhood_risk(&self) -> Result<RiskReport> {
        let plain = NeighborhoodSpec {
            kernel: None,
            ..self.nb.clone()
        };
        self.report(&CellWeights::new(&plain, 1 << self.function.j_max)?)
    }

    /// `E ∫ W_n (f̂ − f)²` with the kernel carried by `nb`.
    pub fn weighted_risk(&self) -> Result<RiskReport> {
        let kernel = self
            .nb
            .kernel
            .as_ref()
            .ok_or_else(|| Error::InvalidNeighborhood("weighted risk needs a kernel".into()))?;
        kernel.validate()?;
        self.report(&CellWeights::new(self.nb, 1 << self.function.j_max)?)
    }
}

pub fn neighborhood_risk(
    estimator: &EstimatorSpec,
    f: &TestFunction,
    spec: &WaveletSpec,
    nb: &NeighborhoodSpec,
    n: u64,
    reps: usize,
    seed: u64,
) -> Result<RiskReport> {
    RiskJob::new(estimator, f, spec, nb, n, reps, seed).neighborhood_risk()
}

pub fn weighted_risk(
    estimator: &EstimatorSpec,
    f: &TestFunction,
    spec: &WaveletSpec,
    nb: &NeighborhoodSpec,
    n: u64,
    reps: usize,
    seed: u64,
) -> Result<RiskReport> {
    RiskJob::new(estimator, f, spec, nb, n, reps, seed).weighted_risk()
}
