//! Neighborhood-size sequences `c_n = d_n n^{−1/(1+2α)}` and the superefficiency experiment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorSpec;
use crate::exec::Execution;
use crate::model::{catalog, two_point_pair, HolderClass};
use crate::risk::engine::{RiskJob, RiskReport};
use crate::risk::fit::{rate_fit, RateFit};
use crate::risk::neighborhood::NeighborhoodSpec;
use crate::wavelet::WaveletSpec;

/// Growth pattern of `d_n` in terms of a log term `ℓ` (`ln n` or `ln B_n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DnKind {
    /// `d_n = s`.
    Constant,
    /// `d_n = s ℓ^{1/(1+2α)}`.
    LogPower,
    /// `d_n = s ℓ`.
    Log,
    /// `d_n = s ℓ ln ℓ`.
    LogLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DnSequence {
    pub kind: DnKind,
    pub scale: f64,
}

impl DnSequence {
    pub fn value(&self, log_term: f64, alpha: f64) -> f64 {
        self.scale
            * match self.kind {
                DnKind::Constant => 1.0,
                DnKind::LogPower => log_term.powf(1.0 / (1.0 + 2.0 * alpha)),
                DnKind::Log => log_term,
                DnKind::LogLog => log_term * log_term.ln(),
            }
    }
}

/// `c_n = d_n n^{−1/(1+2α)}`.
pub fn half_width(d_n: f64, n: u64, alpha: f64) -> f64 {
    d_n * (n as f64).powf(-1.0 / (1.0 + 2.0 * alpha))
}

/// Superefficiency regime, by the size of `d_n` against `ln B_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `d_n (ln B_n)^{−1/(1+2α)} < 1`.
    #[serde(rename = "case_i")]
    CaseI,
    /// `d_n (ln B_n)^{−1/(1+2α)} ≥ 1` and `d_n / ln B_n < 1`.
    #[serde(rename = "case_ii")]
    CaseII,
    /// `d_n / ln B_n ≥ 1`.
    #[serde(rename = "case_iii")]
    CaseIII,
}

impl Regime {
    pub fn admits(&self, d_n: f64, log_b: f64, alpha: f64) -> bool {
        let r1 = d_n * log_b.powf(-1.0 / (1.0 + 2.0 * alpha));
        let r2 = d_n / log_b;
        match self {
            Regime::CaseI => r1 < 1.0,
            Regime::CaseII => r1 >= 1.0 && r2 < 1.0,
            Regime::CaseIII => r2 >= 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuperefficiencyStudy {
    pub regime: Regime,
    pub class: HolderClass,
    /// `f₀ = 0 ∈ F(α, M′)`; the bump uses the budget `M − M′`.
    pub m_prime: f64,
    pub x0: f64,
    pub d_n: DnSequence,
    /// `B_n = n^b`.
    pub b_exponent: f64,
    pub n_grid: Vec<u64>,
    pub reps: usize,
    pub seed: u64,
    pub j_max: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuperefficiencyRow {
    pub n: u64,
    pub b_n: f64,
    pub d_n: f64,
    pub c_n: f64,
    pub at_f0: RiskReport,
    pub at_alternative: RiskReport,
    pub max_risk: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuperefficiencyReport {
    pub regime: Regime,
    pub estimator: String,
    pub rows: Vec<SuperefficiencyRow>,
    /// Risk at `f₀` against `n`; `None` when some risk is zero.
    pub f0_fit: Option<RateFit>,
    /// Max risk against `n / ln B_n`.
    pub max_fit: Option<RateFit>,
}

impl SuperefficiencyStudy {
    pub fn estimator(&self) -> EstimatorSpec {
        match self.regime {
            Regime::CaseI => EstimatorSpec::LocalConstant {
                b_exponent: self.b_exponent,
            },
            Regime::CaseII | Regime::CaseIII => EstimatorSpec::Hybrid,
        }
    }

    pub fn b_n(&self, n: u64) -> f64 {
        (n as f64).powf(self.b_exponent)
    }

    /// Every violated precondition; empty when the study can run.
    pub fn check(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.n_grid.len() < 3 {
            issues.push(format!("n grid has {} points; rate fits need 3", self.n_grid.len()));
        }
        if !(self.b_exponent > 0.0 && self.b_exponent < 1.0) {
            issues.push(format!("B_n exponent {} outside (0, 1)", self.b_exponent));
        }
        if !(self.m_prime >= 0.0 && self.m_prime < self.class.bound) {
            issues.push(format!("M' = {} outside [0, M)", self.m_prime));
        }
        if self.reps < 2 {
            issues.push("reps must be at least 2".into());
        }
        for &n in &self.n_grid {
            if n < 2 {
                issues.push(format!("n = {n} below 2"));
                continue;
            }
            let log_b = self.b_n(n).ln();
            let d = self.d_n.value(log_b, self.class.alpha);
            if !self.regime.admits(d, log_b, self.class.alpha) {
                issues.push(format!("d_n = {d} at n = {n} does not match regime {:?}", self.regime));
            }
            let c = half_width(d, n, self.class.alpha);
            if !(c > 0.0 && c <= 0.5) {
                issues.push(format!("c_n = {c} at n = {n} outside (0, 1/2]"));
            }
        }
        issues
    }

    pub fn run(&self, spec: &WaveletSpec, exec: Execution) -> Result<SuperefficiencyReport> {
        let issues = self.check();
        if !issues.is_empty() {
            return Err(Error::Precondition(issues.join("; ")));
        }
        let estimator = self.estimator();
        let zero = catalog("zero", &self.class, self.j_max, spec)?;
        let mut rows = Vec::with_capacity(self.n_grid.len());
        for &n in &self.n_grid {
            let b_n = self.b_n(n);
            let d_n = self.d_n.value(b_n.ln(), self.class.alpha);
            let c_n = half_width(d_n, n, self.class.alpha);
            let nb = NeighborhoodSpec::new(self.x0, c_n)?.with_d_n(d_n);
            let pair = two_point_pair(&zero, self.x0, n, b_n, &self.class, self.m_prime, spec)?;
            let risk = |f| {
                RiskJob::new(&estimator, f, spec, &nb, n, self.reps, self.seed)
                    .with_exec(exec)
                    .neighborhood_risk()
            };
            let at_f0 = risk(&zero)?;
            let at_alternative = risk(&pair.bumped)?;
            let max_risk = at_f0.mean.max(at_alternative.mean);
            rows.push(SuperefficiencyRow {
                n,
                b_n,
                d_n,
                c_n,
                at_f0,
                at_alternative,
                max_risk,
            });
        }
        let f0_points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.at_f0.mean)).collect();
        let max_points: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.n as f64 / r.b_n.ln(), r.max_risk))
            .collect();
        Ok(SuperefficiencyReport {
            regime: self.regime,
            estimator: estimator.name().to_string(),
            rows,
            f0_fit: rate_fit(&f0_points).ok(),
            max_fit: rate_fit(&max_points).ok(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn study(regime: Regime, d_n: DnSequence) -> SuperefficiencyStudy {
        SuperefficiencyStudy {
            regime,
            class: HolderClass::new(1.0, 8.0).unwrap(),
            m_prime: 4.0,
            x0: 0.5,
            d_n,
            b_exponent: 0.5,
            n_grid: vec![1 << 10, 1 << 12, 1 << 14],
            reps: 10,
            seed: 1,
            j_max: 14,
        }
    }

    #[test]
    fn dn_kinds() {
        let s = DnSequence { kind: DnKind::LogPower, scale: 2.0 };
        assert!((s.value(8.0, 1.0) - 4.0).abs() < 1e-12);
        let s = DnSequence { kind: DnKind::LogLog, scale: 1.0 };
        assert!((s.value(std::f64::consts::E, 1.0) - std::f64::consts::E).abs() < 1e-12);
        assert!((half_width(1.0, 1 << 12, 1.0) - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn regime_mismatch_is_reported() {
        let constant = DnSequence { kind: DnKind::Constant, scale: 1.0 };
        assert!(study(Regime::CaseI, constant).check().is_empty());
        assert!(!study(Regime::CaseIII, constant).check().is_empty());
        let log = DnSequence { kind: DnKind::Log, scale: 1.0 };
        assert!(study(Regime::CaseIII, log).check().is_empty());
        let power = DnSequence { kind: DnKind::LogPower, scale: 1.5 };
        assert!(study(Regime::CaseII, power).check().is_empty());
    }

    #[test]
    fn degenerate_grid_rejected() {
        let mut s = study(Regime::CaseI, DnSequence { kind: DnKind::Constant, scale: 1.0 });
        s.n_grid = vec![1 << 12];
        let spec = crate::wavelet::build_basis("coif1", 0).unwrap();
        assert!(matches!(s.run(&spec, Execution::Sequential), Err(Error::Precondition(_))));
    }
}
