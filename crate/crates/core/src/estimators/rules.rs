use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::plan::{largest_level_below, plan_levels, BlockPartition, LevelPlan};
use crate::estimators::shrink::{
    james_stein_in_place, shrink_factor, soft_threshold, solve_threshold_constant, ThresholdConstants,
};
use crate::model::ObservedSequence;
use crate::risk::NeighborhoodSpec;
use crate::wavelet::{scaling_coefficients, CoefficientTree, WaveletSpec};

/// Branch of the hybrid rule that handles a detail coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Soft,
    Vertical,
    Horizontal,
    Zero,
}

fn shrink_horizontal(out: &mut CoefficientTree, partition: &BlockPartition, lambda: f64, sigma2: f64) {
    for (j, blocks) in &partition.horizontal {
        let Some(level) = out.level_mut(*j) else { continue };
        for block in blocks {
            let len = block.len() as f64;
            james_stein_in_place(&mut level[block.clone()], lambda, len, sigma2);
        }
    }
}

fn zero_from(out: &mut CoefficientTree, level: usize) {
    for (j, d) in (out.coarse_level..).zip(out.detail.iter_mut()) {
        if j >= level {
            d.fill(0.0);
        }
    }
}

/// Level-by-level James–Stein over blocks of `⌈ln n⌉`; levels `j ≥ J` zeroed.
///
/// An observation shallower than `J` is estimated at its available depth.
pub fn block_js(obs: &ObservedSequence, consts: &ThresholdConstants) -> Result<CoefficientTree> {
    let plan = plan_levels(obs.noise_level, 0.5, None, obs.tree.coarse_level)?;
    if obs.tree.max_level < plan.j_dividing {
        log::debug!(
            "block_js: observation depth {} below J = {}",
            obs.tree.max_level,
            plan.j_dividing
        );
    }
    let mut out = obs.tree.clone();
    shrink_horizontal(&mut out, &BlockPartition::blockjs(&plan), consts.lambda_star, obs.sigma2());
    zero_from(&mut out, plan.j_dividing);
    Ok(out)
}

/// Universal soft thresholding of every detail below `J`.
pub fn soft_estimate(obs: &ObservedSequence, threshold: f64) -> Result<CoefficientTree> {
    let plan = plan_levels(obs.noise_level, 0.5, None, obs.tree.coarse_level)?;
    let mut out = obs.tree.clone();
    for level in out.detail.iter_mut() {
        for y in level.iter_mut() {
            *y = soft_threshold(*y, threshold);
        }
    }
    zero_from(&mut out, plan.j_dividing);
    Ok(out)
}

/// Branch of every detail position `j₀ ≤ j < max_level`, indexed `[j − j₀][k]`.
pub fn hybrid_branches(
    plan: &LevelPlan,
    nb: &NeighborhoodSpec,
    spec: &WaveletSpec,
    max_level: usize,
) -> Vec<Vec<Branch>> {
    let partition = BlockPartition::hybrid(plan, nb, spec);
    let mut map: Vec<Vec<Branch>> = (plan.coarse_level..max_level)
        .map(|j| {
            let b = if j < plan.j_upper {
                Branch::Soft
            } else if j < plan.j_dividing {
                Branch::Horizontal
            } else {
                Branch::Zero
            };
            vec![b; 1 << j]
        })
        .collect();
    for &(j, k) in &partition.vertical {
        if j < max_level {
            map[j - plan.coarse_level][k] = Branch::Vertical;
        }
    }
    map
}

/// Soft thresholding off `H^*` below `J^*`, one James–Stein block over `H^*`,
/// horizontal blocks for `J^* ≤ j < J`, zero above.
pub fn hybrid_estimate(
    obs: &ObservedSequence,
    nb: &NeighborhoodSpec,
    consts: &ThresholdConstants,
    spec: &WaveletSpec,
) -> Result<CoefficientTree> {
    nb.validate()?;
    let j0 = obs.tree.coarse_level;
    let plan = plan_levels(obs.noise_level, nb.c_n, None, j0)?;
    if plan.blockjs_regime {
        return Err(Error::Precondition(format!(
            "hybrid rule needs c_n > ln n / n; c_n = {} at n = {}",
            nb.c_n, obs.noise_level
        )));
    }
    let partition = BlockPartition::hybrid(&plan, nb, spec);
    let sigma2 = obs.sigma2();
    let mut out = obs.tree.clone();

    let present: Vec<(usize, usize)> = partition
        .vertical
        .iter()
        .copied()
        .filter(|&(j, _)| j < out.max_level)
        .collect();
    let s2: f64 = present.iter().map(|&(j, k)| out.detail[j - j0][k].powi(2)).sum();
    let vertical_factor = shrink_factor(s2, consts.lambda_star, present.len() as f64, sigma2);

    let upper = plan.j_upper.min(out.max_level);
    for j in j0..upper {
        for y in out.detail[j - j0].iter_mut() {
            *y = soft_threshold(*y, consts.soft_level);
        }
    }
    for &(j, k) in &present {
        out.detail[j - j0][k] = obs.tree.detail[j - j0][k] * vertical_factor;
    }
    shrink_horizontal(&mut out, &partition, consts.lambda_star, sigma2);
    zero_from(&mut out, plan.j_dividing);
    Ok(out)
}

/// One James–Stein block over the coarse coefficients and details through `J′`,
/// with `λ` solving `λ − ln λ − 1 = 2D`; everything above `J′` zeroed.
pub fn superefficient_estimate(obs: &ObservedSequence, d: f64, alpha: f64) -> Result<CoefficientTree> {
    if !(d > 0.0) {
        return Err(Error::InvalidArgument(format!("D = {d} must be positive")));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("smoothness {alpha} must be positive")));
    }
    let j0 = obs.tree.coarse_level;
    let j_prime = superefficient_level(obs.noise_level, alpha);
    if j_prime < j0 as i64 {
        return Err(Error::Precondition(format!(
            "J′ = {j_prime} is below the coarse level {j0} at n = {}",
            obs.noise_level
        )));
    }
    let j_prime = j_prime as usize;
    if obs.tree.max_level <= j_prime {
        return Err(Error::LevelMismatch(format!(
            "observation depth {} does not reach J′ = {j_prime}",
            obs.tree.max_level
        )));
    }
    let lambda = solve_threshold_constant(2.0 * d)?;
    let block_len = 1usize << (j_prime + 1);
    let mut out = obs.tree.clone();
    let s2 = out.coarse.iter().map(|y| y * y).sum::<f64>()
        + out.detail[..=j_prime - j0]
            .iter()
            .flatten()
            .map(|y| y * y)
            .sum::<f64>();
    let factor = shrink_factor(s2, lambda, block_len as f64, obs.sigma2());
    for y in out.coarse.iter_mut() {
        *y *= factor;
    }
    for level in out.detail[..=j_prime - j0].iter_mut() {
        for y in level.iter_mut() {
            *y *= factor;
        }
    }
    zero_from(&mut out, j_prime + 1);
    Ok(out)
}

/// `J′`: largest `j` with `2^j < n^{1/(1+2α)}`.
pub fn superefficient_level(n: u64, alpha: f64) -> i64 {
    largest_level_below((n as f64).powf(1.0 / (1.0 + 2.0 * alpha)))
}

/// `j_n`: largest `j` with `2^j ≤ (n / ln B_n)^{1/(1+2α)}`.
pub fn local_constant_level(n: u64, b_n: f64, alpha: f64) -> i64 {
    let x = (n as f64 / b_n.ln()).powf(1.0 / (1.0 + 2.0 * alpha));
    // 2^j ≤ x, with slack for exact powers of two.
    (x.log2() + 1e-9).floor() as i64
}

/// Soft-thresholded scaling coefficient at level `j_n` over `x₀`, used as a
/// constant estimate on the window.
pub fn local_constant_estimate(
    obs: &ObservedSequence,
    nb: &NeighborhoodSpec,
    b_n: f64,
    alpha: f64,
    spec: &WaveletSpec,
) -> Result<f64> {
    if spec.father_moments == 0 {
        return Err(Error::Precondition(format!(
            "basis `{}` has no father-wavelet vanishing moments",
            spec.name
        )));
    }
    if !(b_n > 1.0) {
        return Err(Error::InvalidArgument(format!("B_n = {b_n} must exceed 1")));
    }
    let n = obs.noise_level;
    let j0 = obs.tree.coarse_level;
    let jn = local_constant_level(n, b_n, alpha);
    if jn < j0 as i64 {
        return Err(Error::Precondition(format!("j_n = {jn} is below the coarse level {j0}")));
    }
    let jn = jn as usize;
    if obs.tree.max_level < jn {
        return Err(Error::LevelMismatch(format!(
            "observation depth {} does not reach j_n = {jn}",
            obs.tree.max_level
        )));
    }
    let xi = scaling_coefficients(&obs.tree, spec, jn)?;
    let size = 1i64 << jn;
    let k = ((size as f64 * nb.x0 - spec.father_centre()).round() as i64).rem_euclid(size) as usize;
    let scale = (size as f64).sqrt();
    let sigma_n = (size as f64 / n as f64).sqrt();
    Ok(soft_threshold(scale * xi[k], sigma_n * (2.0 * b_n.ln()).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_observation;
    use crate::wavelet::{build_basis, support_interval, WaveletKind};

    fn random_tree(j0: usize, jm: usize, seed: u64, scale: f64) -> CoefficientTree {
        let zero = CoefficientTree::zeros(j0, jm);
        let mut t = sample_observation(&zero, 1, seed).unwrap().tree;
        t.coarse.iter_mut().for_each(|v| *v *= scale);
        t.detail.iter_mut().flatten().for_each(|v| *v *= scale);
        t
    }

    #[test]
    fn zero_observation_gives_zero() {
        let consts = ThresholdConstants::new(1024, None).unwrap();
        let obs = ObservedSequence::noiseless(CoefficientTree::zeros(2, 12), 1024);
        assert_eq!(block_js(&obs, &consts).unwrap().energy(), 0.0);
        assert_eq!(superefficient_estimate(&obs, 0.5, 1.0).unwrap().energy(), 0.0);
        let spec = build_basis("haar", 2).unwrap();
        let nb = NeighborhoodSpec::new(0.5, 1.0 / 32.0).unwrap();
        assert_eq!(hybrid_estimate(&obs, &nb, &consts, &spec).unwrap().energy(), 0.0);
    }

    #[test]
    fn block_js_hand_evaluation() {
        let n = 1024u64;
        let consts = ThresholdConstants::new(n, None).unwrap();
        let mut tree = CoefficientTree::zeros(0, 11);
        tree.coarse[0] = 0.3;
        // Level 5: one strong block [0, 7) and one weak block [7, 14).
        tree.detail[5][..7].copy_from_slice(&[1.0, -0.5, 0.2, 0.0, 0.1, 0.3, -0.7]);
        tree.detail[5][7] = 0.01;
        tree.detail[10][3] = 5.0;
        let out = block_js(&ObservedSequence::noiseless(tree.clone(), n), &consts).unwrap();
        let s2: f64 = tree.detail[5][..7].iter().map(|y| y * y).sum();
        let factor = 1.0 - consts.lambda_star * 7.0 / (n as f64 * s2);
        for k in 0..7 {
            assert_eq!(out.detail[5][k], tree.detail[5][k] * factor);
        }
        assert_eq!(out.detail[5][7], 0.0);
        assert_eq!(out.coarse[0], 0.3);
        assert_eq!(out.detail[10][3], 0.0, "level J = 10 is zeroed");
    }

    #[test]
    fn hybrid_branch_map_matches_enumeration() {
        let n = 1u64 << 10;
        let spec = build_basis("haar", 2).unwrap();
        let nb = NeighborhoodSpec::new(0.4, 1.0 / 32.0).unwrap();
        let plan = plan_levels(n, nb.c_n, None, 2).unwrap();
        let map = hybrid_branches(&plan, &nb, &spec, 12);
        let (a, b) = nb.window();
        for j in 2..12 {
            for k in 0..1usize << j {
                let touches = support_interval(j, k, &spec, WaveletKind::Mother).unwrap().intersects(a, b);
                let expect = if j >= 10 {
                    Branch::Zero
                } else if j >= plan.j_upper {
                    Branch::Horizontal
                } else if j >= plan.j_star && touches {
                    Branch::Vertical
                } else {
                    Branch::Soft
                };
                assert_eq!(map[j - 2][k], expect, "({j}, {k})");
            }
        }
    }

    #[test]
    fn hybrid_vertical_clamp_and_high_levels() {
        let n = 1u64 << 10;
        let spec = build_basis("daub4", 2).unwrap();
        let nb = NeighborhoodSpec::new(0.5, 1.0 / 32.0).unwrap();
        let consts = ThresholdConstants::new(n, None).unwrap();
        let plan = plan_levels(n, nb.c_n, None, 2).unwrap();
        let mut tree = CoefficientTree::zeros(2, 12);
        let vertical = BlockPartition::hybrid(&plan, &nb, &spec).vertical;
        for &(j, k) in &vertical {
            tree.detail[j - 2][k] = 0.01;
        }
        tree.detail[9][0] = 100.0;
        let out = hybrid_estimate(&ObservedSequence::noiseless(tree, n), &nb, &consts, &spec).unwrap();
        for &(j, k) in &vertical {
            assert_eq!(out.detail[j - 2][k], 0.0);
        }
        assert_eq!(out.detail[9][0], 0.0);
    }

    #[test]
    fn hybrid_requires_wide_window() {
        let n = 1u64 << 10;
        let spec = build_basis("haar", 0).unwrap();
        let consts = ThresholdConstants::new(n, None).unwrap();
        let nb = NeighborhoodSpec::new(0.5, 0.5 * (n as f64).ln() / n as f64).unwrap();
        let obs = ObservedSequence::noiseless(CoefficientTree::zeros(0, 10), n);
        assert!(matches!(
            hybrid_estimate(&obs, &nb, &consts, &spec),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn hybrid_agrees_with_block_js_on_horizontal_levels() {
        let n = 1u64 << 12;
        let spec = build_basis("daub4", 3).unwrap();
        let consts = ThresholdConstants::new(n, None).unwrap();
        let nb = NeighborhoodSpec::new(0.3, 0.05).unwrap();
        let plan = plan_levels(n, nb.c_n, None, 3).unwrap();
        for seed in 0..5 {
            let tree = random_tree(3, 13, seed, 0.05);
            let obs = ObservedSequence::noiseless(tree, n);
            let h = hybrid_estimate(&obs, &nb, &consts, &spec).unwrap();
            let b = block_js(&obs, &consts).unwrap();
            for j in plan.j_upper..13 {
                assert_eq!(h.level(j), b.level(j));
            }
        }
    }

    #[test]
    fn superefficient_block_limits() {
        let n = 1u64 << 12;
        let tree = random_tree(0, 6, 3, 1e6);
        let out = superefficient_estimate(&ObservedSequence::noiseless(tree.clone(), n), 0.5, 1.0).unwrap();
        // J′ = 3: levels 0..=3 kept nearly intact, levels 4.. zeroed.
        for j in 0..4 {
            for (o, t) in out.level(j).unwrap().iter().zip(tree.level(j).unwrap()) {
                assert!((o - t).abs() <= 1e-9 * t.abs());
            }
        }
        assert!(out.level(4).unwrap().iter().all(|&v| v == 0.0));
        let shallow = ObservedSequence::noiseless(CoefficientTree::zeros(3, 8), 1 << 8);
        assert!(matches!(
            superefficient_estimate(&shallow, 0.5, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn local_constant_cases() {
        let spec = build_basis("coif1", 0).unwrap();
        let nb = NeighborhoodSpec::new(0.5, 0.05).unwrap();
        let n = 1u64 << 12;
        let obs = ObservedSequence::noiseless(CoefficientTree::zeros(0, 10), n);
        assert_eq!(local_constant_estimate(&obs, &nb, 64.0, 1.0, &spec).unwrap(), 0.0);
        let haar = build_basis("haar", 0).unwrap();
        assert!(local_constant_estimate(&obs, &nb, 64.0, 1.0, &haar).is_err());
        // A constant c has ξ_{0,0} = c and the scaling coefficients at j_n equal 2^{−j_n/2} c.
        let mut tree = CoefficientTree::zeros(0, 10);
        tree.coarse[0] = 3.0;
        let obs = ObservedSequence::noiseless(tree, n);
        let jn = local_constant_level(n, 64.0, 1.0);
        let t = ((1u64 << jn) as f64 / n as f64).sqrt() * (2.0 * 64f64.ln()).sqrt();
        let delta = local_constant_estimate(&obs, &nb, 64.0, 1.0, &spec).unwrap();
        assert!((delta - (3.0 - t)).abs() < 1e-10, "{delta}");
    }
}
