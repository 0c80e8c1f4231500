//! Named members of `F(α, M)` with their true coefficient trees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::bump::{two_point_pair, Bump};
use crate::model::holder::{holder_seminorm, HolderClass, HolderEstimate};
use crate::wavelet::{analyze, CoefficientTree, WaveletSpec};

/// Truth trees are computed on a grid `2^TRUTH_OVERSAMPLING` times finer than `2^J_max`.
pub const TRUTH_OVERSAMPLING: usize = 4;
/// Membership grid size for non-integer `α − k` (all-pairs seminorm).
pub const CHECK_POINTS: usize = 2048;
/// Membership grid size when `α − k = 1` (adjacent-pairs seminorm).
pub const LIPSCHITZ_CHECK_POINTS: usize = 1 << 14;

pub const FUNCTIONS: &[&str] = &[
    "zero",
    "constant",
    "ramp",
    "alpha_cusp",
    "smooth_bump",
    "lacunary",
    "two_point_bumped",
];

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "zero" => "f ≡ 0",
        "constant" => "f ≡ c",
        "ramp" => "f(x) = M·x (not periodic)",
        "alpha_cusp" => "f(x) = (M / C_α)|x − x₀|^α, C_α the seminorm of |x|^α; α ≤ 2",
        "smooth_bump" => "scaled C^∞ bump exp(−1/(1 − u²)), u = (x − x₀)/0.25",
        "lacunary" => "A Σ_{j=1}^{J_max} 2^{−jα} cos(2π 2^j x); α ≤ 1",
        "two_point_bumped" => "0 + γ_n⁻¹ g(β_n(x − x₀)) with ρ_n = ln B_n",
        _ => return None,
    })
}

/// Closed-form description of a test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Zero,
    Constant { level: f64 },
    Ramp { slope: f64 },
    Cusp { amplitude: f64, x0: f64, alpha: f64 },
    SmoothBump { amplitude: f64, x0: f64, width: f64 },
    Lacunary { amplitude: f64, alpha: f64, levels: usize },
    Bumped { base: Box<Profile>, bump: Bump, x0: f64, gamma: f64, beta: f64 },
}

impl Profile {
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Constant { level } => *level,
            Profile::Ramp { slope } => slope * x,
            Profile::Cusp { amplitude, x0, alpha } => amplitude * (x - x0).abs().powf(*alpha),
            Profile::SmoothBump { amplitude, x0, width } => {
                let u = (x - x0) / width;
                if u.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (-1.0 / (1.0 - u * u)).exp()
                }
            }
            Profile::Lacunary { amplitude, alpha, levels } => {
                amplitude
                    * (1..=*levels)
                        .map(|j| {
                            let f = (1u64 << j) as f64;
                            f.powf(-alpha) * (std::f64::consts::TAU * f * x).cos()
                        })
                        .sum::<f64>()
            }
            Profile::Bumped { base, bump, x0, gamma, beta } => {
                base.value(x) + bump.value(beta * (x - x0)) / gamma
            }
        }
    }

    /// Whether `f(0) = f(1)` so the periodized expansion has no edge jump.
    pub fn is_periodic(&self) -> bool {
        !matches!(self, Profile::Ramp { .. })
    }
}

/// Optional knobs for [`catalog_with`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogParams {
    pub x0: f64,
    /// Value of `constant`.
    pub level: f64,
    /// Fraction of `M` used by `smooth_bump` and `lacunary`.
    pub fill: f64,
    /// Noise level and superefficiency target for `two_point_bumped`
    /// (defaults `2^J_max` and `√n`).
    pub n: Option<u64>,
    pub b_n: Option<f64>,
}

impl Default for CatalogParams {
    fn default() -> Self {
        Self {
            x0: 0.5,
            level: 1.0,
            fill: 0.5,
            n: None,
            b_n: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestFunction {
    pub name: String,
    pub profile: Profile,
    pub basis: String,
    pub j_max: usize,
    /// Midpoint values on `2^{J_max + TRUTH_OVERSAMPLING}` cells.
    pub samples: Vec<f64>,
    /// Coefficients through level `J_max − 1`.
    pub true_tree: CoefficientTree,
    pub declared_class: HolderClass,
    /// Grid seminorm behind the membership claim, when checked.
    pub membership: Option<HolderEstimate>,
}

impl TestFunction {
    pub fn from_profile(
        name: &str,
        profile: Profile,
        cls: HolderClass,
        j_max: usize,
        spec: &WaveletSpec,
    ) -> Result<Self> {
        let fine = j_max + TRUTH_OVERSAMPLING;
        if fine > 28 {
            return Err(Error::InvalidArgument(format!("J_max = {j_max} is too deep")));
        }
        let len = 1usize << fine;
        let samples: Vec<f64> = (0..len)
            .map(|i| profile.value((i as f64 + 0.5) / len as f64))
            .collect();
        let true_tree = analyze(&samples, spec, fine)?.truncated(j_max);
        let est = check_membership(&profile, &cls)?;
        if !est.within(cls.bound) {
            return Err(Error::MembershipFailed {
                seminorm: est.seminorm,
                bound: cls.bound,
            });
        }
        Ok(Self {
            name: name.to_string(),
            profile,
            basis: spec.name.clone(),
            j_max,
            samples,
            true_tree,
            declared_class: cls,
            membership: Some(est),
        })
    }

    pub fn value(&self, x: f64) -> f64 {
        self.profile.value(x)
    }
}

/// Grid seminorm of the profile on `[0, 1]`.
pub fn check_membership(profile: &Profile, cls: &HolderClass) -> Result<HolderEstimate> {
    let k = cls.k() as f64;
    let points = if cls.alpha - k == 1.0 {
        LIPSCHITZ_CHECK_POINTS
    } else {
        CHECK_POINTS
    };
    let samples: Vec<f64> = (0..=points)
        .map(|i| profile.value(i as f64 / points as f64))
        .collect();
    holder_seminorm(&samples, 1.0 / points as f64, cls.alpha)
}

/// Seminorm of `|x|^α` on the line.
fn cusp_constant(alpha: f64) -> Result<f64> {
    if alpha <= 1.0 {
        Ok(1.0)
    } else if alpha <= 2.0 {
        Ok(alpha * 2f64.powf(2.0 - alpha))
    } else {
        Err(Error::InvalidArgument(format!("alpha_cusp needs α ≤ 2, got {alpha}")))
    }
}

pub fn catalog(name: &str, cls: &HolderClass, j_max: usize, spec: &WaveletSpec) -> Result<TestFunction> {
    catalog_with(name, cls, j_max, spec, &CatalogParams::default())
}

pub fn catalog_with(
    name: &str,
    cls: &HolderClass,
    j_max: usize,
    spec: &WaveletSpec,
    params: &CatalogParams,
) -> Result<TestFunction> {
    let m = cls.bound;
    let profile = match name {
        "zero" => Profile::Zero,
        "constant" => Profile::Constant {
            level: params.level,
        },
        "ramp" => Profile::Ramp { slope: m },
        "alpha_cusp" => Profile::Cusp {
            amplitude: m / cusp_constant(cls.alpha)?,
            x0: params.x0,
            alpha: cls.alpha,
        },
        "smooth_bump" => {
            let shape = Profile::SmoothBump {
                amplitude: 1.0,
                x0: params.x0,
                width: 0.25,
            };
            let unit = check_membership(&shape, cls)?.seminorm;
            Profile::SmoothBump {
                amplitude: params.fill * m / unit,
                x0: params.x0,
                width: 0.25,
            }
        }
        "lacunary" => {
            if cls.alpha > 1.0 {
                return Err(Error::InvalidArgument(format!("lacunary needs α ≤ 1, got {}", cls.alpha)));
            }
            // |cos a − cos b| ≤ 2^{1−α}|a − b|^α bounds each term's seminorm.
            let per_term = 2f64.powf(1.0 - cls.alpha) * std::f64::consts::TAU.powf(cls.alpha);
            Profile::Lacunary {
                amplitude: params.fill * m / (j_max as f64 * per_term),
                alpha: cls.alpha,
                levels: j_max,
            }
        }
        "two_point_bumped" => {
            let n = params.n.unwrap_or(1u64 << j_max);
            let b_n = params.b_n.unwrap_or((n as f64).sqrt());
            let zero = catalog_with("zero", cls, j_max, spec, params)?;
            return Ok(two_point_pair(&zero, params.x0, n, b_n, cls, 0.0, spec)?.bumped);
        }
        other => return Err(Error::UnknownFunction(other.to_string())),
    };
    TestFunction::from_profile(name, profile, *cls, j_max, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::build_basis;

    fn cls(alpha: f64, m: f64) -> HolderClass {
        HolderClass::new(alpha, m).unwrap()
    }

    #[test]
    fn zero_is_zero() {
        let spec = build_basis("daub4", 3).unwrap();
        let f = catalog("zero", &cls(1.0, 1.0), 8, &spec).unwrap();
        assert!(f.samples.iter().all(|&s| s == 0.0));
        assert_eq!(f.true_tree.energy(), 0.0);
    }

    #[test]
    fn constant_has_no_details() {
        let spec = build_basis("daub8", 2).unwrap();
        let f = catalog("constant", &cls(0.5, 1.0), 8, &spec).unwrap();
        for (_, level) in f.true_tree.levels() {
            assert!(level.iter().all(|t| t.abs() < 1e-12));
        }
    }

    #[test]
    fn every_member_builds_and_checks() {
        let spec = build_basis("daub4", 3).unwrap();
        for name in FUNCTIONS {
            let f = catalog(name, &cls(1.0, 4.0), 10, &spec).unwrap();
            assert!(f.membership.unwrap().within(4.0), "{name}");
            assert_eq!(f.true_tree.max_level, 10);
        }
    }

    #[test]
    fn cusp_uses_its_full_budget() {
        for alpha in [0.5, 1.0, 1.5] {
            let f = catalog("alpha_cusp", &cls(alpha, 2.0), 8, &build_basis("haar", 0).unwrap()).unwrap();
            let s = f.membership.unwrap().seminorm;
            assert!(s <= 2.0 * 1.001 && s > 1.8, "α={alpha}: {s}");
        }
    }

    #[test]
    fn membership_violation_is_reported() {
        let spec = build_basis("haar", 0).unwrap();
        let profile = Profile::Ramp { slope: 3.0 };
        let err = TestFunction::from_profile("ramp", profile, cls(1.0, 1.0), 6, &spec).unwrap_err();
        assert!(matches!(err, Error::MembershipFailed { .. }));
    }

    #[test]
    fn unknown_name() {
        let spec = build_basis("haar", 0).unwrap();
        assert!(matches!(
            catalog("wiggle", &cls(1.0, 1.0), 6, &spec),
            Err(Error::UnknownFunction(_))
        ));
        assert!(catalog("lacunary", &cls(1.5, 1.0), 6, &spec).is_err());
    }

    fn decay_slope(alpha: f64) -> f64 {
        let spec = build_basis("daub4", 0).unwrap();
        let f = catalog("alpha_cusp", &cls(alpha, 1.0), 13, &spec).unwrap();
        let pts: Vec<(f64, f64)> = f
            .true_tree
            .levels()
            .filter(|(j, _)| (4..=12).contains(j))
            .map(|(j, l)| (j as f64, l.iter().fold(0.0f64, |m, t| m.max(t.abs())).log2()))
            .collect();
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn cusp_coefficients_decay_at_the_holder_rate() {
        for alpha in [0.5, 1.0] {
            let slope = decay_slope(alpha);
            assert!((slope + 0.5 + alpha).abs() < 0.1, "α={alpha}: {slope}");
        }
    }
}
