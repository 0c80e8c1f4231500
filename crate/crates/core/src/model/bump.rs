//! Plateau bump `g` and the two-point perturbation `f₀ + γ_n⁻¹ g(β_n(· − x₀))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::catalog::{Profile, TestFunction};
use crate::model::holder::{holder_seminorm, HolderClass};
use crate::wavelet::WaveletSpec;

/// Grid points on `[−A, A]` used for the bump's own seminorm check.
const BUMP_CHECK_POINTS: usize = 4096;
const SIMPSON_INTERVALS: usize = 4096;

/// `S(t) = t^{p+1} Σ_{i≤p} C(p+i, i)(1−t)^i`: rises from 0 to 1 and is `C^p`
/// at both ends.
pub fn smoothstep(order: usize, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut binom = 1.0;
    let mut pow = 1.0;
    for i in 0..=order {
        sum += binom * pow;
        binom *= (order + i + 1) as f64 / (i + 1) as f64;
        pow *= 1.0 - t;
    }
    t.powi(order as i32 + 1) * sum
}

fn simpson(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let m = SIMPSON_INTERVALS;
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Even bump with plateau `height` on `[−1, 1]`, support `[−A, A]` and unit `L²` norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub alpha: f64,
    pub half_width: f64,
    pub height: f64,
    pub order: usize,
    /// Grid seminorm of `g` and the spacing it was measured at.
    pub seminorm: f64,
    pub spacing: f64,
}

impl Bump {
    pub fn value(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= 1.0 {
            self.height
        } else if ax >= self.half_width {
            0.0
        } else {
            self.height * smoothstep(self.order, (self.half_width - ax) / (self.half_width - 1.0))
        }
    }

    /// `∫ g²` by Simpson's rule on each piece.
    pub fn energy(&self) -> f64 {
        let a = self.half_width;
        2.0 * (self.height * self.height + simpson(1.0, a, |x| self.value(x).powi(2)))
    }
}

fn shape_energy(order: usize, half_width: f64) -> f64 {
    2.0 * (1.0 + (half_width - 1.0) * simpson(0.0, 1.0, |t| smoothstep(order, t).powi(2)))
}

/// Builds `g` for smoothness `budget.alpha` with seminorm at most `budget.bound`.
pub fn make_bump(budget: &HolderClass, half_width: f64) -> Result<Bump> {
    if !(half_width > 1.0 && half_width.is_finite()) {
        return Err(Error::BumpTooNarrow(half_width));
    }
    let order = budget.alpha.ceil() as usize + 1;
    let height = 1.0 / shape_energy(order, half_width).sqrt();
    let mut bump = Bump {
        alpha: budget.alpha,
        half_width,
        height,
        order,
        seminorm: 0.0,
        spacing: 0.0,
    };
    let spacing = 2.0 * half_width / BUMP_CHECK_POINTS as f64;
    let samples: Vec<f64> = (0..=BUMP_CHECK_POINTS)
        .map(|i| bump.value(-half_width + i as f64 * spacing))
        .collect();
    let est = holder_seminorm(&samples, spacing, budget.alpha)?;
    bump.seminorm = est.seminorm;
    bump.spacing = spacing;
    if !est.within(budget.bound) {
        return Err(Error::BumpTooNarrow(half_width));
    }
    Ok(bump)
}

/// Smallest half-width (to relative precision `1e-3`) admitted by [`make_bump`].
pub fn minimal_support(budget: &HolderClass) -> Result<f64> {
    let mut hi = 2.0;
    while make_bump(budget, hi).is_err() {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::BumpTooNarrow(hi));
        }
    }
    let mut lo = 1.0;
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if make_bump(budget, mid).is_ok() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `f_{n,0} = f₀` and `f_{n,1} = f₀ + γ_n⁻¹ g(β_n(· − x₀))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoPointPair {
    pub base: TestFunction,
    pub bumped: TestFunction,
    pub bump: Bump,
    pub x0: f64,
    pub gamma_n: f64,
    pub beta_n: f64,
    pub b_n: f64,
    /// `n ∫ (f₁ − f₀)²` by quadrature on the fine grid.
    pub rho_n: f64,
}

impl TwoPointPair {
    /// Member `θ ∈ {0, 1}`.
    pub fn member(&self, theta: u8) -> &TestFunction {
        if theta == 0 {
            &self.base
        } else {
            &self.bumped
        }
    }

    /// Support of the perturbation.
    pub fn perturbation_support(&self) -> (f64, f64) {
        let r = self.bump.half_width / self.beta_n;
        (self.x0 - r, self.x0 + r)
    }
}

/// `(γ_n, β_n) = ((n / ln B_n)^{α/(1+2α)}, (n / ln B_n)^{1/(1+2α)})`.
pub fn bump_scales(n: u64, b_n: f64, alpha: f64) -> (f64, f64) {
    let ratio = n as f64 / b_n.ln();
    (
        ratio.powf(alpha / (1.0 + 2.0 * alpha)),
        ratio.powf(1.0 / (1.0 + 2.0 * alpha)),
    )
}

pub fn two_point_pair(
    f0: &TestFunction,
    x0: f64,
    n: u64,
    b_n: f64,
    cls: &HolderClass,
    m_prime: f64,
    spec: &WaveletSpec,
) -> Result<TwoPointPair> {
    if !(m_prime >= 0.0 && m_prime < cls.bound) {
        return Err(Error::InvalidArgument(format!(
            "M' = {m_prime} must lie in [0, M = {})",
            cls.bound
        )));
    }
    if !(b_n > 1.0) {
        return Err(Error::InvalidArgument(format!("B_n = {b_n} must exceed 1")));
    }
    if !(b_n.ln() < n as f64) {
        return Err(Error::InvalidArgument(format!("ln B_n must be below n = {n}")));
    }
    let gap = HolderClass::new(cls.alpha, cls.bound - m_prime)?;
    let bump = make_bump(&gap, minimal_support(&gap)?)?;
    let (gamma_n, beta_n) = bump_scales(n, b_n, cls.alpha);
    let r = bump.half_width / beta_n;
    if x0 - r < 0.0 || x0 + r > 1.0 {
        return Err(Error::BumpOutsideInterval {
            lo: x0 - r,
            hi: x0 + r,
        });
    }
    let profile = Profile::Bumped {
        base: Box::new(f0.profile.clone()),
        bump,
        x0,
        gamma: gamma_n,
        beta: beta_n,
    };
    let bumped = TestFunction::from_profile("two_point_bumped", profile, *cls, f0.j_max, spec)?;
    let cell = 1.0 / bumped.samples.len() as f64;
    let rho_n = n as f64
        * bumped
            .samples
            .iter()
            .zip(&f0.samples)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
        * cell;
    Ok(TwoPointPair {
        base: f0.clone(),
        bumped,
        bump,
        x0,
        gamma_n,
        beta_n,
        b_n,
        rho_n,
    })
}
