use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coarse scaling coefficients at level `j₀` plus detail coefficients for
/// `j₀ ≤ j < max_level`. Level `j` holds exactly `2^j` entries, 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTree {
    pub coarse_level: usize,
    pub max_level: usize,
    pub coarse: Vec<f64>,
    pub detail: Vec<Vec<f64>>,
}

impl CoefficientTree {
    pub fn zeros(coarse_level: usize, max_level: usize) -> Self {
        assert!(max_level >= coarse_level, "max level below coarse level");
        Self {
            coarse_level,
            max_level,
            coarse: vec![0.0; 1 << coarse_level],
            detail: (coarse_level..max_level).map(|j| vec![0.0; 1 << j]).collect(),
        }
    }

    pub fn new(
        coarse_level: usize,
        max_level: usize,
        coarse: Vec<f64>,
        detail: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let tree = Self {
            coarse_level,
            max_level,
            coarse,
            detail,
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_level < self.coarse_level {
            return Err(Error::LevelMismatch(format!(
                "max level {} below coarse level {}",
                self.max_level, self.coarse_level
            )));
        }
        if self.coarse.len() != 1 << self.coarse_level {
            return Err(Error::LevelMismatch(format!(
                "coarse level {} has {} entries",
                self.coarse_level,
                self.coarse.len()
            )));
        }
        if self.detail.len() != self.max_level - self.coarse_level {
            return Err(Error::LevelMismatch(format!(
                "expected {} detail levels, found {}",
                self.max_level - self.coarse_level,
                self.detail.len()
            )));
        }
        for (j, level) in self.levels() {
            if level.len() != 1 << j {
                return Err(Error::LevelMismatch(format!(
                    "level {j} has {} entries",
                    level.len()
                )));
            }
        }
        if !self.iter_all().all(f64::is_finite) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// Detail coefficients at level `j`, if stored.
    pub fn level(&self, j: usize) -> Option<&[f64]> {
        j.checked_sub(self.coarse_level)
            .and_then(|i| self.detail.get(i))
            .map(Vec::as_slice)
    }

    pub fn level_mut(&mut self, j: usize) -> Option<&mut Vec<f64>> {
        j.checked_sub(self.coarse_level)
            .and_then(move |i| self.detail.get_mut(i))
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, &[f64])> {
        self.detail
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.coarse_level + i, v.as_slice()))
    }

    fn iter_all(&self) -> impl Iterator<Item = f64> + '_ {
        self.coarse
            .iter()
            .chain(self.detail.iter().flatten())
            .copied()
    }

    /// Total number of stored coefficients (`2^max_level`).
    pub fn len(&self) -> usize {
        self.coarse.len() + self.detail.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn energy(&self) -> f64 {
        self.iter_all().map(|v| v * v).sum()
    }

    pub fn detail_energy(&self) -> f64 {
        self.detail.iter().flatten().map(|v| v * v).sum()
    }

    /// Drops every level at or above `level`.
    pub fn truncated(&self, level: usize) -> Self {
        let level = level.clamp(self.coarse_level, self.max_level);
        Self {
            coarse_level: self.coarse_level,
            max_level: level,
            coarse: self.coarse.clone(),
            detail: self.detail[..level - self.coarse_level].to_vec(),
        }
    }

    /// Pads with zero levels up to `level`.
    pub fn extended(mut self, level: usize) -> Self {
        for j in self.max_level..level {
            self.detail.push(vec![0.0; 1 << j]);
        }
        self.max_level = self.max_level.max(level);
        self
    }

    /// `self - other`, with missing levels of the shallower tree read as zero.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.coarse_level != other.coarse_level {
            return Err(Error::LevelMismatch(format!(
                "coarse levels {} and {}",
                self.coarse_level, other.coarse_level
            )));
        }
        let top = self.max_level.max(other.max_level);
        let mut out = self.clone().extended(top);
        for (o, v) in out.coarse.iter_mut().zip(&other.coarse) {
            *o -= v;
        }
        for (j, level) in other.levels() {
            let dst = out.level_mut(j).expect("extended tree holds level");
            for (o, v) in dst.iter_mut().zip(level) {
                *o -= v;
            }
        }
        Ok(out)
    }

    /// Zeroes the coarse block, leaving only the ψ-expansion.
    pub fn details_only(&self) -> Self {
        let mut out = self.clone();
        out.coarse.iter_mut().for_each(|v| *v = 0.0);
        out
    }

    /// Level-ordered text form. Values use Rust's shortest round-trip formatting,
    /// so `from_text(to_text(t)) == t` exactly.
    ///
    /// ```text
    /// coefficient-tree v1
    /// basis <name>
    /// coarse_level <j0>
    /// max_level <J>
    /// coarse <2^j0 values>
    /// level <j> <2^j values>      (one line per j0 <= j < J)
    /// ```
    pub fn to_text(&self, basis: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "coefficient-tree v1");
        let _ = writeln!(out, "basis {basis}");
        let _ = writeln!(out, "coarse_level {}", self.coarse_level);
        let _ = writeln!(out, "max_level {}", self.max_level);
        out.push_str("coarse");
        for v in &self.coarse {
            let _ = write!(out, " {v:?}");
        }
        out.push('\n');
        for (j, level) in self.levels() {
            let _ = write!(out, "level {j}");
            for v in level {
                let _ = write!(out, " {v:?}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`CoefficientTree::to_text`] output, returning the basis name too.
    pub fn from_text(text: &str) -> Result<(String, Self)> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("coefficient-tree v1") {
            return Err(bad("missing `coefficient-tree v1` header"));
        }
        let mut field = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad("truncated header"))?;
            line.strip_prefix(key)
                .map(|v| v.trim().to_string())
                .ok_or_else(|| bad(&format!("expected `{key}`")))
        };
        let basis = field("basis")?;
        let coarse_level: usize = field("coarse_level")?
            .parse()
            .map_err(|_| bad("coarse_level"))?;
        let max_level: usize = field("max_level")?
            .parse()
            .map_err(|_| bad("max_level"))?;
        let parse_values = |s: &str| -> Result<Vec<f64>> {
            s.split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|_| bad(&format!("bad value `{v}`"))))
                .collect()
        };
        let coarse = parse_values(&field("coarse")?)?;
        let mut detail = Vec::new();
        for j in coarse_level..max_level {
            let rest = field("level")?;
            let (idx, values) = rest.split_once(' ').unwrap_or((rest.as_str(), ""));
            if idx.parse::<usize>().ok() != Some(j) {
                return Err(bad(&format!("expected level {j}")));
            }
            detail.push(parse_values(values)?);
        }
        Ok((basis, Self::new(coarse_level, max_level, coarse, detail)?))
    }
}
