//! Support geometry of periodized basis functions and the index sets used by
//! the neighborhood bounds.
//!
//! Supports are closed arcs of the circle `[0, 1)` whose endpoints are dyadic
//! rationals; a support that merely touches a window at one point counts as
//! intersecting it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::NeighborhoodSpec;
use crate::wavelet::{CoefficientTree, WaveletKind, WaveletSpec};

/// `numerator / 2^level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    pub numerator: i64,
    pub level: u32,
}

impl Dyadic {
    pub fn new(numerator: i64, level: u32) -> Self {
        Self { numerator, level }
    }

    /// Exact for `|numerator| < 2^53`.
    pub fn value(self) -> f64 {
        self.numerator as f64 / (1u64 << self.level) as f64
    }
}

/// Support of `φ_{j,k}` or `ψ_{j,k}` before wrapping: `[k 2^-j, (k + N) 2^-j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl SupportInterval {
    pub fn width(&self) -> f64 {
        self.hi.value() - self.lo.value()
    }

    /// The support as closed arcs inside `[0, 1]`.
    pub fn arcs(&self) -> Vec<(f64, f64)> {
        let (lo, hi) = (self.lo.value(), self.hi.value());
        if hi - lo >= 1.0 {
            vec![(0.0, 1.0)]
        } else if hi <= 1.0 {
            vec![(lo, hi)]
        } else {
            vec![(lo, 1.0), (0.0, hi - 1.0)]
        }
    }

    pub fn contained_in(&self, a: f64, b: f64) -> bool {
        self.arcs().iter().all(|&(p, q)| p >= a && q <= b)
    }

    pub fn intersects(&self, a: f64, b: f64) -> bool {
        self.arcs().iter().any(|&(p, q)| p <= b && q >= a)
    }
}

pub fn support_interval(
    j: usize,
    k: usize,
    spec: &WaveletSpec,
    kind: WaveletKind,
) -> Result<SupportInterval> {
    if j < spec.coarse_level || k >= 1usize << j {
        return Err(Error::InvalidArgument(format!(
            "index ({j}, {k}) outside the basis"
        )));
    }
    let n = spec.support_len(kind) as i64;
    Ok(SupportInterval {
        lo: Dyadic::new(k as i64, j as u32),
        hi: Dyadic::new(k as i64 + n, j as u32),
    })
}

/// Set of `(level, position)` pairs.
pub type IndexSet = BTreeSet<(usize, usize)>;

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodIndexSets {
    /// Supports contained in the window (`S₁`).
    pub inside: IndexSet,
    /// Supports meeting the window (`S₂`).
    pub touching: IndexSet,
    /// `H_j` for each level in range, in level order.
    pub per_level: Vec<(usize, Vec<usize>)>,
}

/// Positions at level `j` whose mother support meets `[a, b]`, without a full scan.
pub fn touching_positions(j: usize, a: f64, b: f64, spec: &WaveletSpec) -> Vec<usize> {
    let size = 1usize << j;
    let n = spec.support_mother as i64;
    let scale = size as f64;
    // k 2^-j <= b + shift and (k + n) 2^-j >= a + shift for some shift in {-1, 0}.
    let mut out = BTreeSet::new();
    for shift in [-1i64, 0] {
        let lo = ((a - shift as f64) * scale).ceil() as i64 - n;
        let hi = ((b - shift as f64) * scale).floor() as i64;
        for k in lo.max(0)..=hi.min(size as i64 - 1) {
            out.insert(k as usize);
        }
    }
    out.into_iter()
        .filter(|&k| {
            support_interval(j, k, spec, WaveletKind::Mother)
                .map(|s| s.intersects(a, b))
                .unwrap_or(false)
        })
        .collect()
}

pub fn neighborhood_index_sets(
    nb: &NeighborhoodSpec,
    j_lo: usize,
    j_hi: usize,
    spec: &WaveletSpec,
) -> Result<NeighborhoodIndexSets> {
    if j_lo < spec.coarse_level {
        return Err(Error::InvalidArgument(format!(
            "level range starts at {j_lo}, below the coarse level {}",
            spec.coarse_level
        )));
    }
    if j_hi <= j_lo {
        return Err(Error::InvalidArgument(format!(
            "empty level range [{j_lo}, {j_hi})"
        )));
    }
    let (a, b) = nb.window();
    let mut inside = IndexSet::new();
    let mut touching = IndexSet::new();
    let mut per_level = Vec::with_capacity(j_hi - j_lo);
    for j in j_lo..j_hi {
        let hits = touching_positions(j, a, b, spec);
        for &k in &hits {
            touching.insert((j, k));
            if support_interval(j, k, spec, WaveletKind::Mother)?.contained_in(a, b) {
                inside.insert((j, k));
            }
        }
        per_level.push((j, hits));
    }
    Ok(NeighborhoodIndexSets {
        inside,
        touching,
        per_level,
    })
}

/// `(Σ_{S₁} θ², Σ_{S₂} θ²)` over the detail levels of `tree`.
pub fn restricted_norm_bounds(
    tree: &CoefficientTree,
    nb: &NeighborhoodSpec,
    spec: &WaveletSpec,
) -> Result<(f64, f64)> {
    tree.validate()?;
    if tree.max_level == tree.coarse_level {
        return Ok((0.0, 0.0));
    }
    let sets = neighborhood_index_sets(nb, tree.coarse_level, tree.max_level, spec)?;
    let sum = |set: &IndexSet| -> f64 {
        set.iter()
            .map(|&(j, k)| tree.level(j).map_or(0.0, |l| l[k] * l[k]))
            .sum()
    };
    Ok((sum(&sets.inside), sum(&sets.touching)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::window_integral;
    use crate::wavelet::{build_basis, synthesize};
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    #[test]
    fn haar_support_is_dyadic_interval() {
        let spec = build_basis("haar", 0).unwrap();
        let s = support_interval(2, 1, &spec, WaveletKind::Mother).unwrap();
        assert_eq!((s.lo.value(), s.hi.value()), (0.25, 0.5));
        let next = support_interval(3, 1, &spec, WaveletKind::Mother).unwrap();
        assert_eq!(next.width(), s.width() / 2.0);
    }

    #[test]
    fn daub4_support_width_matches_synthesized_psi() {
        let spec = build_basis("daub4", 0).unwrap();
        let s = support_interval(4, 5, &spec, WaveletKind::Mother).unwrap();
        assert_eq!(s.width(), 3.0 / 16.0);
        let mut tree = CoefficientTree::zeros(0, 12);
        tree.level_mut(4).unwrap()[5] = 1.0;
        let samples = synthesize(&tree, &spec).unwrap();
        let nonzero: Vec<usize> = (0..samples.len()).filter(|&m| samples[m].abs() > 1e-14).collect();
        let first = *nonzero.first().unwrap() as f64 / 4096.0;
        let last = (*nonzero.last().unwrap() + 1) as f64 / 4096.0;
        assert!(first >= s.lo.value() && last <= s.hi.value());
        // The synthesized ψ fills its support up to one fine-grid cell per tap.
        assert!(last - first > s.width() - 4.0 / 4096.0);
    }

    #[test]
    fn whole_interval_window_takes_everything() {
        let spec = build_basis("daub4", 1).unwrap();
        let sets = neighborhood_index_sets(&NeighborhoodSpec::global(), 1, 6, &spec).unwrap();
        assert_eq!(sets.inside, sets.touching);
        assert_eq!(sets.touching.len(), (1..6).map(|j| 1usize << j).sum::<usize>());
    }

    #[test]
    fn haar_quarter_window() {
        let spec = build_basis("haar", 0).unwrap();
        let nb = NeighborhoodSpec::new(0.375, 0.125).unwrap();
        let sets = neighborhood_index_sets(&nb, 2, 3, &spec).unwrap();
        assert_eq!(sets.inside, IndexSet::from([(2, 1)]));
        assert_eq!(sets.touching, IndexSet::from([(2, 0), (2, 1), (2, 2)]));
    }

    #[test]
    fn touching_set_matches_brute_force() {
        let spec = build_basis("daub4", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x0 = 0.05 + 0.9 * unit(&mut rng);
            let c = 0.5 * unit(&mut rng).max(1e-3);
            let nb = NeighborhoodSpec::new(x0, c).unwrap();
            let (a, b) = nb.window();
            let sets = neighborhood_index_sets(&nb, 2, 9, &spec).unwrap();
            let mut brute_touch = IndexSet::new();
            let mut brute_inside = IndexSet::new();
            for j in 2..9 {
                for k in 0..1usize << j {
                    let s = support_interval(j, k, &spec, WaveletKind::Mother).unwrap();
                    if s.intersects(a, b) {
                        brute_touch.insert((j, k));
                    }
                    if s.contained_in(a, b) {
                        brute_inside.insert((j, k));
                    }
                }
            }
            assert_eq!(sets.touching, brute_touch);
            assert_eq!(sets.inside, brute_inside);
            assert!(sets.inside.is_subset(&sets.touching));
            for (j, h) in &sets.per_level {
                // Closed-interval touching at both window ends adds one index to the
                // N_ψ + 2^j·2c_n count.
                let bound = spec.support_mother + ((1usize << j) as f64 * 2.0 * c).floor() as usize + 1;
                assert!(h.len() <= bound, "level {j}: {} > {bound}", h.len());
            }
        }
    }

    #[test]
    fn shrinking_window_never_grows_sets() {
        let spec = build_basis("daub8", 0).unwrap();
        let wide = NeighborhoodSpec::new(0.4, 0.2).unwrap();
        let narrow = NeighborhoodSpec::new(0.4, 0.05).unwrap();
        let w = neighborhood_index_sets(&wide, 0, 10, &spec).unwrap();
        let n = neighborhood_index_sets(&narrow, 0, 10, &spec).unwrap();
        assert!(n.inside.is_subset(&w.inside));
        assert!(n.touching.is_subset(&w.touching));
    }

    #[test]
    fn sandwich_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in ["haar", "daub4"] {
            let spec = build_basis(name, 2).unwrap();
            for _ in 0..20 {
                let mut tree = CoefficientTree::zeros(2, 8);
                for level in tree.detail.iter_mut() {
                    level.iter_mut().for_each(|v| *v = unit(&mut rng) - 0.5);
                }
                let nb = NeighborhoodSpec::new(0.05 + 0.9 * unit(&mut rng), 0.01 + 0.3 * unit(&mut rng))
                    .unwrap();
                let (lower, upper) = restricted_norm_bounds(&tree, &nb, &spec).unwrap();
                let fine = tree.clone().extended(12);
                let (a, b) = nb.window();
                let integral = window_integral(&synthesize(&fine, &spec).unwrap(), a, b);
                assert!(lower - 1e-9 <= integral && integral <= upper + 1e-9);
            }
        }
        let spec = build_basis("haar", 2).unwrap();
        let zero = CoefficientTree::zeros(2, 6);
        assert_eq!(
            restricted_norm_bounds(&zero, &NeighborhoodSpec::global(), &spec).unwrap(),
            (0.0, 0.0)
        );
    }

    #[test]
    fn index_set_errors() {
        let spec = build_basis("haar", 3).unwrap();
        let nb = NeighborhoodSpec::global();
        assert!(neighborhood_index_sets(&nb, 2, 5, &spec).is_err());
        assert!(neighborhood_index_sets(&nb, 4, 4, &spec).is_err());
    }
}
