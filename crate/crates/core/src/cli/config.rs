//! TOML experiment configuration and its validation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::EstimatorSpec;
use crate::model::{HolderClass, FUNCTIONS};
use crate::risk::{half_width, DnKind, DnSequence, Kernel, Regime};
use crate::wavelet::FAMILIES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    RiskTable,
    RateStudy,
    Superefficiency,
    LemmaSuite,
}

/// How `c_n` depends on `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum NeighborhoodRule {
    /// Same `c_n` for every `n`.
    Fixed { c_n: f64 },
    /// `c_n = d_n n^{−1/(1+2α)}` with `d_n` driven by `ln n`.
    DnSequence { kind: DnKind, scale: f64 },
    /// `c_n = n^{−γ}`.
    Power { gamma: f64 },
}

impl NeighborhoodRule {
    /// `(c_n, d_n)` at noise level `n`.
    pub fn at(&self, n: u64, alpha: f64) -> (f64, f64) {
        let scale = (n as f64).powf(1.0 / (1.0 + 2.0 * alpha));
        match self {
            Self::Fixed { c_n } => (*c_n, c_n * scale),
            Self::DnSequence { kind, scale: s } => {
                let d = DnSequence { kind: *kind, scale: *s }.value((n as f64).ln(), alpha);
                (half_width(d, n, alpha), d)
            }
            Self::Power { gamma } => {
                let c = (n as f64).powf(-gamma);
                (c, c * scale)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperefficiencySection {
    pub regime: Regime,
    pub d_kind: DnKind,
    #[serde(default = "one")]
    pub d_scale: f64,
    #[serde(default = "half")]
    pub b_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default = "default_basis")]
    pub basis: String,
    #[serde(default)]
    pub coarse_level: usize,
    pub alpha: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "M_prime", default)]
    pub m_prime: Option<f64>,
    #[serde(default = "half")]
    pub x0: f64,
    #[serde(default)]
    pub estimators: Vec<String>,
    #[serde(default)]
    pub functions: Vec<String>,
    /// Superefficient rule parameter `D`.
    #[serde(default)]
    pub d: Option<f64>,
    /// Local-constant `B_n = n^b`.
    #[serde(default)]
    pub b_exponent: Option<f64>,
    /// Weight kernel (`uniform` or `triangular`); switches to weighted risk.
    #[serde(default)]
    pub kernel: Option<String>,
    pub neighborhood: Option<NeighborhoodRule>,
    #[serde(default)]
    pub superefficiency: Option<SuperefficiencySection>,
    pub n_grid: Vec<u64>,
    /// Truth depth; defaults to `log₂ max(n_grid)`.
    #[serde(default)]
    pub j_max: Option<usize>,
    pub reps: usize,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
}

fn default_basis() -> String {
    "daub4".into()
}
fn half() -> f64 {
    0.5
}
fn one() -> f64 {
    1.0
}

/// Field path and message for one violated invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn class(&self) -> Result<HolderClass> {
        HolderClass::new(self.alpha, self.m)
    }

    pub fn j_max(&self) -> usize {
        self.j_max
            .unwrap_or_else(|| self.n_grid.iter().max().map_or(0, |n| n.trailing_zeros() as usize))
    }

    pub fn kernel(&self) -> Option<Kernel> {
        match self.kernel.as_deref() {
            Some("uniform") => Some(Kernel::uniform()),
            Some("triangular") => Some(Kernel::triangular()),
            _ => None,
        }
    }

    pub fn estimator_specs(&self) -> Result<Vec<EstimatorSpec>> {
        self.estimators
            .iter()
            .map(|e| EstimatorSpec::parse(e, self.d, self.b_exponent))
            .collect()
    }

    /// Every violated invariant; empty for a runnable config.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |field: &str, message: String| {
            out.push(Diagnostic {
                field: field.to_string(),
                message,
            })
        };
        if self.reps < 2 {
            push("reps", format!("must be at least 2, got {}", self.reps));
        }
        if !FAMILIES.contains(&self.basis.as_str()) {
            push("basis", format!("unknown family `{}`; expected one of {FAMILIES:?}", self.basis));
        }
        if self.coarse_level > 30 {
            push("coarse_level", format!("{} is too deep", self.coarse_level));
        }
        if !(self.alpha > 0.0) {
            push("alpha", format!("must be positive, got {}", self.alpha));
        }
        if !(self.m > 0.0) {
            push("M", format!("must be positive, got {}", self.m));
        }
        if let Some(mp) = self.m_prime {
            if !(mp >= 0.0 && mp < self.m) {
                push("M_prime", format!("must lie in [0, M), got {mp}"));
            }
        }
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            push("x0", format!("must lie in (0, 1), got {}", self.x0));
        }
        if self.n_grid.is_empty() {
            push("n_grid", "must not be empty".into());
        }
        for (i, n) in self.n_grid.iter().enumerate() {
            if !n.is_power_of_two() || *n < 2 {
                push(&format!("n_grid[{i}]"), format!("{n} is not a power of two ≥ 2"));
            }
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            push("n_grid", "must be strictly increasing".into());
        }
        if self.kind == ExperimentKind::RateStudy && self.n_grid.len() < 3 {
            push("n_grid", "a rate study needs at least 3 noise levels".into());
        }
        let j_max = self.j_max();
        if j_max < self.coarse_level || j_max > 24 {
            push("j_max", format!("{j_max} must lie in [coarse_level, 24]"));
        }
        if let Some(k) = &self.kernel {
            if self.kernel().is_none() {
                push("kernel", format!("unknown kernel `{k}`; expected uniform or triangular"));
            }
        }
        if let Some(d) = self.d {
            if !(d > 0.0) {
                push("d", format!("must be positive, got {d}"));
            }
        }
        if let Some(b) = self.b_exponent {
            if !(b > 0.0 && b < 1.0) {
                push("b_exponent", format!("must lie in (0, 1), got {b}"));
            }
        }
        match self.kind {
            ExperimentKind::RiskTable | ExperimentKind::RateStudy => {
                if self.estimators.is_empty() {
                    push("estimators", "must name at least one estimator".into());
                }
                for (i, e) in self.estimators.iter().enumerate() {
                    if EstimatorSpec::parse(e, None, None).is_err() {
                        push(&format!("estimators[{i}]"), format!("unknown estimator `{e}`"));
                    }
                }
                if self.functions.is_empty() {
                    push("functions", "must name at least one test function".into());
                }
                for (i, f) in self.functions.iter().enumerate() {
                    if !FUNCTIONS.contains(&f.as_str()) {
                        push(&format!("functions[{i}]"), format!("unknown test function `{f}`"));
                    }
                }
                match &self.neighborhood {
                    None => push("neighborhood", "missing neighborhood rule".into()),
                    Some(rule) => self.check_rule(rule, &mut push),
                }
            }
            ExperimentKind::Superefficiency => match &self.superefficiency {
                None => push("superefficiency", "missing section".into()),
                Some(s) => {
                    if !(s.b_exponent > 0.0 && s.b_exponent < 1.0) {
                        push("superefficiency.b_exponent", format!("must lie in (0, 1), got {}", s.b_exponent));
                    }
                    if !(s.d_scale > 0.0) {
                        push("superefficiency.d_scale", format!("must be positive, got {}", s.d_scale));
                    }
                    if self.n_grid.len() < 3 {
                        push("n_grid", "a superefficiency study needs at least 3 noise levels".into());
                    }
                }
            },
            ExperimentKind::LemmaSuite => {}
        }
        out
    }

    fn check_rule(&self, rule: &NeighborhoodRule, push: &mut impl FnMut(&str, String)) {
        match rule {
            NeighborhoodRule::Power { gamma } if !(*gamma > 0.0 && *gamma <= 1.0) => {
                push("neighborhood.gamma", format!("γ = {gamma} must lie in (0, 1]"));
                return;
            }
            NeighborhoodRule::DnSequence { scale, .. } if !(*scale > 0.0) => {
                push("neighborhood.scale", format!("must be positive, got {scale}"));
                return;
            }
            _ => {}
        }
        if !(self.alpha > 0.0) {
            return;
        }
        for &n in &self.n_grid {
            if n < 2 {
                continue;
            }
            let (c, _) = rule.at(n, self.alpha);
            if !(c > 0.0 && c <= 0.5) {
                push("neighborhood", format!("c_n = {c} at n = {n} outside (0, 1/2]"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
kind = "rate_study"
basis = "daub4"
coarse_level = 3
alpha = 1.0
M = 1.0
estimators = ["blockjs"]
functions = ["alpha_cusp"]
n_grid = [1024, 2048, 4096]
reps = 4
seed = 7

[neighborhood]
rule = "fixed"
c_n = 0.5
"#;

    #[test]
    fn well_formed_config_has_no_diagnostics() {
        let c = ExperimentConfig::parse(GOOD).unwrap();
        assert!(c.diagnostics().is_empty(), "{:?}", c.diagnostics());
        assert_eq!(c.j_max(), 12);
    }

    #[test]
    fn reps_below_two() {
        let c = ExperimentConfig::parse(&GOOD.replace("reps = 4", "reps = 1")).unwrap();
        assert!(c.diagnostics().iter().any(|d| d.field == "reps"));
    }

    #[test]
    fn gamma_out_of_range() {
        let text = GOOD.replace("rule = \"fixed\"\nc_n = 0.5", "rule = \"power\"\ngamma = 1.5");
        let c = ExperimentConfig::parse(&text).unwrap();
        let d = c.diagnostics();
        assert!(d.iter().any(|d| d.field == "neighborhood.gamma" && d.message.contains("(0, 1]")), "{d:?}");
    }

    #[test]
    fn grid_must_be_increasing_powers_of_two() {
        let c = ExperimentConfig::parse(&GOOD.replace("[1024, 2048, 4096]", "[1000, 4096, 2048]")).unwrap();
        let d = c.diagnostics();
        assert!(d.iter().any(|d| d.field == "n_grid[0]"));
        assert!(d.iter().any(|d| d.message.contains("strictly increasing")));
    }

    #[test]
    fn unknown_fields_fail_to_parse() {
        assert!(ExperimentConfig::parse(&format!("{GOOD}\nbogus = 1\n")).is_err());
    }

    #[test]
    fn rule_values() {
        let (c, d) = NeighborhoodRule::DnSequence { kind: DnKind::Constant, scale: 1.0 }.at(4096, 1.0);
        assert!((c - 1.0 / 16.0).abs() < 1e-15 && (d - 1.0).abs() < 1e-15);
        let (c, _) = NeighborhoodRule::Power { gamma: 0.5 }.at(4096, 1.0);
        assert!((c - 1.0 / 64.0).abs() < 1e-15);
    }
}
