use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::NeighborhoodSpec;
use crate::wavelet::{touching_positions, WaveletSpec};

/// Guards `2^j` comparisons against rounding in `log₂`.
const LOG_SLACK: f64 = 1e-9;

/// Smallest `j ≥ 0` with `2^j ≥ x`.
pub fn smallest_level_at_least(x: f64) -> usize {
    if x <= 1.0 {
        0
    } else {
        (x.log2() - LOG_SLACK).ceil() as usize
    }
}

/// Largest `j` with `2^j < x` (negative when `x ≤ 1`).
pub fn largest_level_below(x: f64) -> i64 {
    (x.log2() - LOG_SLACK).floor() as i64
}

/// Levels `J`, `J_*`, `J^*`, `J′` and block length `L = ⌈ln n⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelPlan {
    pub n: u64,
    pub coarse_level: usize,
    /// `2^J ≥ n`.
    pub j_dividing: usize,
    /// `2^{J_*} ≥ 1/c_n`, raised to `j₀`.
    pub j_star: usize,
    /// `2^{J^*} ≥ ln n / c_n`, raised to `J_*`.
    pub j_upper: usize,
    /// `2^{J′} < n^{1/(1+2α)}`, when `α` was given.
    pub j_prime: Option<i64>,
    pub block_length: usize,
    /// `c_n ≤ ln n / n`: BlockJS replaces the hybrid rule.
    pub blockjs_regime: bool,
}

pub fn plan_levels(n: u64, c_n: f64, alpha: Option<f64>, j0: usize) -> Result<LevelPlan> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("noise level n = {n} must be at least 2")));
    }
    if !(c_n > 0.0 && c_n <= 0.5) {
        return Err(Error::InvalidNeighborhood(format!("half-width {c_n} outside (0, 1/2]")));
    }
    if let Some(a) = alpha {
        if !(a > 0.0) {
            return Err(Error::InvalidArgument(format!("smoothness {a} must be positive")));
        }
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let j_star = smallest_level_at_least(1.0 / c_n).max(j0);
    let j_upper = smallest_level_at_least(ln_n / c_n).max(j_star);
    Ok(LevelPlan {
        n,
        coarse_level: j0,
        j_dividing: smallest_level_at_least(nf),
        j_star,
        j_upper,
        j_prime: alpha.map(|a| largest_level_below(nf.powf(1.0 / (1.0 + 2.0 * a)))),
        block_length: ln_n.ceil() as usize,
        blockjs_regime: c_n <= ln_n / nf,
    })
}

/// Consecutive blocks of `block_length` over `0..len`; the last keeps the remainder.
pub fn horizontal_blocks(len: usize, block_length: usize) -> Vec<Range<usize>> {
    let l = block_length.max(1);
    (0..len).step_by(l).map(|s| s..(s + l).min(len)).collect()
}

/// Horizontal blocks per level and the vertical block `H^*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub horizontal: Vec<(usize, Vec<Range<usize>>)>,
    pub vertical: Vec<(usize, usize)>,
}

impl BlockPartition {
    /// Horizontal blocks for `J^* ≤ j < J` and `H^*` over `J_* ≤ j < J^*`.
    pub fn hybrid(plan: &LevelPlan, nb: &NeighborhoodSpec, spec: &WaveletSpec) -> Self {
        let (a, b) = nb.window();
        let vertical = (plan.j_star..plan.j_upper)
            .flat_map(|j| touching_positions(j, a, b, spec).into_iter().map(move |k| (j, k)))
            .collect();
        let horizontal = (plan.j_upper..plan.j_dividing)
            .map(|j| (j, horizontal_blocks(1 << j, plan.block_length)))
            .collect();
        Self {
            horizontal,
            vertical,
        }
    }

    /// Horizontal blocks for `j₀ ≤ j < J`, no vertical block.
    pub fn blockjs(plan: &LevelPlan) -> Self {
        Self {
            horizontal: (plan.coarse_level..plan.j_dividing)
                .map(|j| (j, horizontal_blocks(1 << j, plan.block_length)))
                .collect(),
            vertical: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_plan() {
        let p = plan_levels(1024, 0.5, None, 0).unwrap();
        assert_eq!(p.j_dividing, 10);
        assert_eq!(p.j_star, 1);
        assert_eq!(p.block_length, 7);
        assert!(!p.blockjs_regime);
        assert_eq!(plan_levels(1024, 0.5, None, 3).unwrap().j_star, 3);
    }

    #[test]
    fn narrow_plan() {
        let p = plan_levels(1024, 1.0 / 32.0, None, 2).unwrap();
        assert_eq!(p.j_star, 5);
        // 32 · ln 1024 ≈ 221.8.
        assert_eq!(p.j_upper, 8);
    }

    #[test]
    fn blockjs_regime_flag() {
        let n = 1u64 << 12;
        let edge = (n as f64).ln() / n as f64;
        assert!(plan_levels(n, edge, None, 0).unwrap().blockjs_regime);
        assert!(!plan_levels(n, 2.0 * edge, None, 0).unwrap().blockjs_regime);
        assert!(plan_levels(n, 0.0, None, 0).is_err());
    }

    #[test]
    fn prime_level_is_strict() {
        // n^{1/3} = 16 exactly: 2^4 < 16 fails, so J′ = 3.
        assert_eq!(plan_levels(1 << 12, 0.5, Some(1.0), 0).unwrap().j_prime, Some(3));
        assert_eq!(plan_levels(1 << 13, 0.5, Some(1.0), 0).unwrap().j_prime, Some(4));
        assert_eq!(largest_level_below(1.0), -1);
    }

    #[test]
    fn blocks_cover_each_level() {
        for (len, l) in [(8, 3), (16, 7), (4, 7), (64, 8)] {
            let blocks = horizontal_blocks(len, l);
            let mut next = 0;
            for b in &blocks {
                assert_eq!(b.start, next);
                assert!(b.len() <= l && !b.is_empty());
                next = b.end;
            }
            assert_eq!(next, len);
        }
    }
}
