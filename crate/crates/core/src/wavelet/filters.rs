//! Orthonormal compactly supported filter banks.
//!
//! Analysis convention, for a periodic sequence `x` of length `m`:
//!
//! ```text
//! approx[k] = Σ_i h[i] x[(2k + i) mod m]
//! detail[k] = Σ_i g[i] x[(2k + i) mod m],   g[i] = (-1)^i h[L - 1 - i]
//! ```
//!
//! With this convention the father and mother wavelets at `(j, k)` are both
//! supported on `[k 2^-j, (k + L - 1) 2^-j]`, so `N_φ = N_ψ = L - 1`.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the orthonormality identities of a filter.
pub const FILTER_TOLERANCE: f64 = 1e-12;

/// Which member of the basis pair a support query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveletKind {
    Father,
    Mother,
}

/// Orthonormal filter pair plus the regularity metadata the estimators need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub name: String,
    pub low_pass: Vec<f64>,
    pub high_pass: Vec<f64>,
    /// Support length of φ.
    pub support_father: usize,
    /// Support length of ψ.
    pub support_mother: usize,
    /// Vanishing moments of ψ.
    pub regularity: usize,
    /// Vanishing moments of φ about its centre of mass (Coiflet-style bases).
    pub father_moments: usize,
    pub coarse_level: usize,
}

/// Families accepted by [`build_basis`].
pub const FAMILIES: &[&str] = &["haar", "daub4", "daub8", "coif1"];

fn family_taps(name: &str) -> Option<(Vec<f64>, usize, usize)> {
    match name {
        "haar" => Some((vec![1.0 / SQRT_2, 1.0 / SQRT_2], 1, 0)),
        "daub4" => {
            let s3 = 3f64.sqrt();
            let d = 4.0 * SQRT_2;
            Some((
                vec![(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d],
                2,
                0,
            ))
        }
        "daub8" => Some((
            vec![
                -0.010597401785069032,
                0.0328830116668852,
                0.030841381835560764,
                -0.18703481171909309,
                -0.027983769416859854,
                0.6308807679298589,
                0.7148465705529157,
                0.2303778133088965,
            ],
            4,
            0,
        )),
        "coif1" => {
            let s7 = 7f64.sqrt();
            let c = SQRT_2 / 32.0;
            Some((
                vec![
                    c * (s7 - 3.0),
                    c * (1.0 - s7),
                    c * (14.0 - 2.0 * s7),
                    c * (14.0 + 2.0 * s7),
                    c * (5.0 + s7),
                    c * (1.0 - s7),
                ],
                2,
                1,
            ))
        }
        _ => None,
    }
}

/// Quadrature-mirror high-pass filter for `low_pass`.
pub fn quadrature_mirror(low_pass: &[f64]) -> Vec<f64> {
    let len = low_pass.len();
    (0..len)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * low_pass[len - 1 - i]
        })
        .collect()
}

/// Checks `Σh² = 1`, `Σ h_i h_{i+2m} = 0` for `m ≠ 0` and `Σh = √2`.
pub fn check_orthonormal(name: &str, taps: &[f64]) -> Result<()> {
    let fail = |detail: String| Error::FilterNotOrthonormal {
        name: name.to_string(),
        detail,
    };
    if taps.len() < 2 || !taps.len().is_multiple_of(2) {
        return Err(fail(format!("filter length {} must be even", taps.len())));
    }
    let sum: f64 = taps.iter().sum();
    if (sum - SQRT_2).abs() > FILTER_TOLERANCE {
        return Err(fail(format!("tap sum {sum} differs from sqrt(2)")));
    }
    for shift in (0..taps.len()).step_by(2) {
        let dot: f64 = taps
            .iter()
            .zip(taps.iter().skip(shift))
            .map(|(a, b)| a * b)
            .sum();
        let target = if shift == 0 { 1.0 } else { 0.0 };
        if (dot - target).abs() > FILTER_TOLERANCE {
            return Err(fail(format!("shift {shift} inner product {dot}")));
        }
    }
    Ok(())
}

/// Builds the named orthonormal basis with coarse level `j₀`.
pub fn build_basis(name: &str, coarse_level: i64) -> Result<WaveletSpec> {
    if !(0..=30).contains(&coarse_level) {
        return Err(Error::InvalidCoarseLevel(coarse_level));
    }
    let (low_pass, regularity, father_moments) =
        family_taps(name).ok_or_else(|| Error::UnknownWavelet(name.to_string()))?;
    check_orthonormal(name, &low_pass)?;
    let high_pass = quadrature_mirror(&low_pass);
    let support = low_pass.len() - 1;
    Ok(WaveletSpec {
        name: name.to_string(),
        low_pass,
        high_pass,
        support_father: support,
        support_mother: support,
        regularity,
        father_moments,
        coarse_level: coarse_level as usize,
    })
}

impl WaveletSpec {
    pub fn filter_len(&self) -> usize {
        self.low_pass.len()
    }

    /// Support length for the requested member of the pair.
    pub fn support_len(&self, kind: WaveletKind) -> usize {
        match kind {
            WaveletKind::Father => self.support_father,
            WaveletKind::Mother => self.support_mother,
        }
    }

    /// First moment `∫ x φ(x) dx` of the father wavelet in the analysis convention.
    pub fn father_centre(&self) -> f64 {
        self.low_pass
            .iter()
            .enumerate()
            .map(|(i, h)| i as f64 * h)
            .sum::<f64>()
            / SQRT_2
    }

    /// Same filters, different coarse level.
    pub fn with_coarse_level(&self, coarse_level: usize) -> Self {
        Self {
            coarse_level,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_taps_are_forced() {
        let spec = build_basis("haar", 3).unwrap();
        assert_eq!(spec.low_pass.len(), 2);
        for h in &spec.low_pass {
            assert!((h - 1.0 / SQRT_2).abs() < 1e-15);
        }
        assert_eq!(spec.support_mother, 1);
        assert_eq!(spec.regularity, 1);
        assert_eq!(spec.coarse_level, 3);
    }

    #[test]
    fn rejects_negative_level_and_unknown_family() {
        assert_eq!(build_basis("haar", -1), Err(Error::InvalidCoarseLevel(-1)));
        assert!(matches!(
            build_basis("mexican_hat", 2),
            Err(Error::UnknownWavelet(_))
        ));
    }

    #[test]
    fn every_family_is_orthonormal_with_vanishing_moments() {
        for name in FAMILIES {
            let spec = build_basis(name, 0).unwrap();
            for m in 0..spec.regularity {
                let moment: f64 = spec
                    .high_pass
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (i as f64).powi(m as i32) * g)
                    .sum();
                assert!(moment.abs() < 1e-10, "{name}: moment {m} = {moment}");
            }
            let next: f64 = spec
                .high_pass
                .iter()
                .enumerate()
                .map(|(i, g)| (i as f64).powi(spec.regularity as i32) * g)
                .sum();
            assert!(next.abs() > 1e-6, "{name}: regularity understated");
        }
    }

    #[test]
    fn coiflet_father_centre_is_an_integer_shift() {
        // The Coiflet property: local averages through φ sample f at an integer offset.
        let spec = build_basis("coif1", 0).unwrap();
        assert!((spec.father_centre() - 3.0).abs() < 1e-12);
        assert_eq!(spec.father_moments, 1);
        let daub = build_basis("daub4", 0).unwrap();
        assert!((daub.father_centre() - (3.0 - 3f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_filter_is_rejected() {
        let err = check_orthonormal("bad", &[0.5, 0.5, 0.5, 0.5]).unwrap_err();
        assert!(matches!(err, Error::FilterNotOrthonormal { .. }));
    }
}
