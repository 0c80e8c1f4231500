//! Neighborhoods `[x₀ - c_n, x₀ + c_n]`, weight kernels, and exact window
//! integrals of cell functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `∫w = 1`.
pub const KERNEL_MASS_TOLERANCE: f64 = 1e-8;

/// Piecewise-linear weight function given by knots `(u, w(u))`, sorted by `u`.
/// Repeating an abscissa encodes a jump, so the uniform kernel is
/// `[(-1, 0), (-1, ½), (1, ½), (1, 0)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub name: String,
    pub knots: Vec<(f64, f64)>,
}

impl Kernel {
    /// `w(u) = ½ 1[-1, 1]`, which reproduces the plain neighborhood average.
    pub fn uniform() -> Self {
        Self {
            name: "uniform".into(),
            knots: vec![(-1.0, 0.0), (-1.0, 0.5), (1.0, 0.5), (1.0, 0.0)],
        }
    }

    /// `w(u) = (1 - |u|)_+`.
    pub fn triangular() -> Self {
        Self {
            name: "triangular".into(),
            knots: vec![(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)],
        }
    }

    pub fn custom(name: &str, knots: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            knots,
        }
    }

    pub fn mass(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|p| (p[1].0 - p[0].0) * (p[0].1 + p[1].1) / 2.0)
            .sum()
    }

    pub fn value(&self, u: f64) -> f64 {
        for p in self.knots.windows(2) {
            let ((x0, w0), (x1, w1)) = (p[0], p[1]);
            if x1 > x0 && u >= x0 && u <= x1 {
                return w0 + (w1 - w0) * (u - x0) / (x1 - x0);
            }
        }
        0.0
    }

    pub fn support(&self) -> (f64, f64) {
        (
            self.knots.first().map_or(0.0, |k| k.0),
            self.knots.last().map_or(0.0, |k| k.0),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Error::InvalidNeighborhood(format!("kernel `{}`: {m}", self.name));
        if self.knots.len() < 2 {
            return Err(bad("needs at least two knots".into()));
        }
        if self.knots.windows(2).any(|p| p[1].0 < p[0].0) {
            return Err(bad("knots must be sorted".into()));
        }
        if self.knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite() || k.1 < 0.0) {
            return Err(bad("weights must be finite and nonnegative".into()));
        }
        let mass = self.mass();
        if (mass - 1.0).abs() > KERNEL_MASS_TOLERANCE {
            return Err(bad(format!("integrates to {mass}, not 1")));
        }
        if self.value(0.0) <= 0.0 {
            return Err(bad("w(0) must be positive".into()));
        }
        Ok(())
    }

    /// `∫_{-∞}^{u} w`.
    pub fn cdf(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for p in self.knots.windows(2) {
            let ((x0, w0), (x1, w1)) = (p[0], p[1]);
            if x1 <= x0 {
                continue;
            }
            if u <= x0 {
                break;
            }
            let top = u.min(x1);
            let wt = w0 + (w1 - w0) * (top - x0) / (x1 - x0);
            acc += (top - x0) * (w0 + wt) / 2.0;
            if u <= x1 {
                break;
            }
        }
        acc
    }
}

/// Centre and half-width of the neighborhood, plus an optional weight kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodSpec {
    pub x0: f64,
    pub c_n: f64,
    /// `c_n · n^{1/(1+2α)}`, carried for reporting only.
    pub d_n: Option<f64>,
    pub kernel: Option<Kernel>,
}

impl NeighborhoodSpec {
    pub fn new(x0: f64, c_n: f64) -> Result<Self> {
        let nb = Self {
            x0,
            c_n,
            d_n: None,
            kernel: None,
        };
        nb.validate()?;
        Ok(nb)
    }

    /// The whole interval: `x₀ = ½`, `c_n = ½`.
    pub fn global() -> Self {
        Self {
            x0: 0.5,
            c_n: 0.5,
            d_n: None,
            kernel: None,
        }
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Result<Self> {
        kernel.validate()?;
        self.kernel = Some(kernel);
        Ok(self)
    }

    pub fn with_d_n(mut self, d_n: f64) -> Self {
        self.d_n = Some(d_n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            return Err(Error::InvalidNeighborhood(format!(
                "centre {} outside (0, 1)",
                self.x0
            )));
        }
        if !(self.c_n > 0.0 && self.c_n <= 0.5) {
            return Err(Error::InvalidNeighborhood(format!(
                "half-width {} outside (0, 1/2]",
                self.c_n
            )));
        }
        if let Some(k) = &self.kernel {
            k.validate()?;
        }
        Ok(())
    }

    /// `[x₀ - c_n, x₀ + c_n] ∩ [0, 1]`, or the clamped kernel support.
    pub fn window(&self) -> (f64, f64) {
        let (lo, hi) = self.kernel.as_ref().map_or((-1.0, 1.0), Kernel::support);
        (
            (self.x0 + self.c_n * lo).max(0.0),
            (self.x0 + self.c_n * hi).min(1.0),
        )
    }

    /// Whether the unclamped window leaves `[0, 1]`.
    pub fn is_clamped(&self) -> bool {
        let (lo, hi) = self.kernel.as_ref().map_or((-1.0, 1.0), Kernel::support);
        self.x0 + self.c_n * lo < 0.0 || self.x0 + self.c_n * hi > 1.0
    }
}

/// Per-cell weights `∫_{cell} W_n` for a grid of `len` cells on `[0, 1]`,
/// normalized to unit mass when the window was clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct CellWeights {
    pub first: usize,
    pub weights: Vec<f64>,
}

impl CellWeights {
    pub fn new(nb: &NeighborhoodSpec, len: usize) -> Result<Self> {
        nb.validate()?;
        let kernel = nb.kernel.clone().unwrap_or_else(Kernel::uniform);
        let (a, b) = nb.window();
        let cell = 1.0 / len as f64;
        let first = ((a * len as f64).floor() as usize).min(len - 1);
        let last = ((b * len as f64).ceil() as usize).clamp(first + 1, len);
        let to_u = |x: f64| (x - nb.x0) / nb.c_n;
        let weights: Vec<f64> = (first..last)
            .map(|m| {
                let lo = (m as f64 * cell).max(a);
                let hi = ((m + 1) as f64 * cell).min(b);
                if hi <= lo {
                    0.0
                } else {
                    kernel.cdf(to_u(hi)) - kernel.cdf(to_u(lo))
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidNeighborhood("window has no mass on [0, 1]".into()));
        }
        let weights = if nb.is_clamped() {
            weights.into_iter().map(|w| w / total).collect()
        } else {
            weights
        };
        Ok(Self { first, weights })
    }

    /// `∫ W_n(x) e(x)² dx` for the cell function with values `samples`.
    pub fn weighted_energy(&self, samples: &[f64]) -> f64 {
        samples[self.first..self.first + self.weights.len()]
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| w * e * e)
            .sum()
    }
}

/// Exact `∫_a^b e(x)² dx` for a cell function on `[0, 1]`.
pub fn window_integral(samples: &[f64], a: f64, b: f64) -> f64 {
    let len = samples.len();
    let cell = 1.0 / len as f64;
    let mut acc = 0.0;
    for (m, e) in samples.iter().enumerate() {
        let lo = (m as f64 * cell).max(a);
        let hi = ((m + 1) as f64 * cell).min(b);
        if hi > lo {
            acc += (hi - lo) * e * e;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_kernels_are_valid() {
        Kernel::uniform().validate().unwrap();
        Kernel::triangular().validate().unwrap();
        assert!((Kernel::uniform().cdf(0.3) - 0.65).abs() < 1e-15);
        assert!((Kernel::triangular().cdf(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_kernel_is_rejected() {
        let k = Kernel::custom("heavy", vec![(-1.0, 0.0), (-1.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
        assert!(k.validate().is_err());
        assert!(NeighborhoodSpec::global().with_kernel(k).is_err());
    }

    #[test]
    fn neighborhood_bounds() {
        assert!(NeighborhoodSpec::new(0.0, 0.1).is_err());
        assert!(NeighborhoodSpec::new(0.5, 0.0).is_err());
        assert!(NeighborhoodSpec::new(0.5, 0.6).is_err());
        let nb = NeighborhoodSpec::new(0.1, 0.25).unwrap();
        assert_eq!(nb.window(), (0.0, 0.35));
        assert!(nb.is_clamped());
    }

    #[test]
    fn uniform_weights_match_overlap_over_window_length() {
        let nb = NeighborhoodSpec::new(0.37, 0.083).unwrap();
        let cw = CellWeights::new(&nb, 256).unwrap();
        let (a, b) = nb.window();
        for (i, w) in cw.weights.iter().enumerate() {
            let m = cw.first + i;
            let lo = (m as f64 / 256.0).max(a);
            let hi = ((m + 1) as f64 / 256.0).min(b);
            assert!((w - (hi - lo).max(0.0) / (2.0 * nb.c_n)).abs() < 1e-14);
        }
        assert!((cw.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clamped_window_renormalizes_by_actual_length() {
        let nb = NeighborhoodSpec::new(0.9, 0.2).unwrap();
        let cw = CellWeights::new(&nb, 64).unwrap();
        let ones = vec![1.0; 64];
        assert!((cw.weighted_energy(&ones) - 1.0).abs() < 1e-12);
    }
}
