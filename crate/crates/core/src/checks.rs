//! Self-contained numerical checks of the block-risk bounds, the restricted-norm
//! sandwich, the truncated-moment monotonicity and coefficient decay.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimators::james_stein_block;
use crate::exec::Execution;
use crate::model::NormalStream;
use crate::risk::{window_integral, NeighborhoodSpec};
use crate::wavelet::{restricted_norm_bounds, synthesize, CoefficientTree, WaveletSpec};

/// Levels added before integrating a synthesized detail tree.
pub const SANDWICH_REFINEMENT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichTrial {
    pub x0: f64,
    pub c_n: f64,
    pub lower: f64,
    pub integral: f64,
    pub upper: f64,
}

impl SandwichTrial {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower - tol <= self.integral && self.integral <= self.upper + tol
    }
}

/// Random details in `[−½, ½)` on levels `[j₀, max_level)` and a random window.
pub fn sandwich_trial(spec: &WaveletSpec, max_level: usize, seed: u64, stream: u64) -> Result<SandwichTrial> {
    let mut rng = NormalStream::new(seed, stream);
    let mut tree = CoefficientTree::zeros(spec.coarse_level, max_level);
    for v in tree.detail.iter_mut().flatten() {
        *v = rng.next_uniform() - 0.5;
    }
    let x0 = 0.05 + 0.9 * rng.next_uniform();
    let c_n = (0.005 + 0.3 * rng.next_uniform()).min(0.5);
    let nb = NeighborhoodSpec::new(x0, c_n)?;
    let (lower, upper) = restricted_norm_bounds(&tree, &nb, spec)?;
    let fine = tree.extended(max_level + SANDWICH_REFINEMENT);
    let (a, b) = nb.window();
    let integral = window_integral(&synthesize(&fine, spec)?, a, b);
    Ok(SandwichTrial {
        x0,
        c_n,
        lower,
        integral,
        upper,
    })
}

/// Monte Carlo `Σ E(θ̂_i − θ_i)²` of one James–Stein block, and per-coordinate
/// risk of the first entry. Returns `(block mean, block se, first mean, first se)`.
pub fn block_risk(
    theta: &[f64],
    lambda: f64,
    sigma2: f64,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> (f64, f64, f64, f64) {
    let sigma = sigma2.sqrt();
    let l = theta.len() as f64;
    let losses = exec.map_indexed(reps, |rep| {
        let mut rng = NormalStream::new(seed, rep as u64);
        let ys: Vec<f64> = theta.iter().map(|t| t + sigma * rng.next_normal()).collect();
        let est = james_stein_block(&ys, lambda, l, sigma2);
        let block: f64 = est.iter().zip(theta).map(|(e, t)| (e - t).powi(2)).sum();
        (block, (est[0] - theta[0]).powi(2))
    });
    let (b, f): (Vec<f64>, Vec<f64>) = losses.into_iter().unzip();
    let (bm, bs) = mean_se(&b);
    let (fm, fs) = mean_se(&f);
    (bm, bs, fm, fs)
}

/// Sample mean and standard error, summed in order.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (m - 1.0) / m).sqrt())
}

/// Least-squares slope of `log₂ max_k |θ_{j,k}|` on `j` over `levels`.
pub fn decay_slope(tree: &CoefficientTree, levels: std::ops::RangeInclusive<usize>) -> f64 {
    let pts: Vec<(f64, f64)> = tree
        .levels()
        .filter(|(j, _)| levels.contains(j))
        .map(|(j, l)| (j as f64, l.iter().fold(0.0f64, |m, t| m.max(t.abs())).log2()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
