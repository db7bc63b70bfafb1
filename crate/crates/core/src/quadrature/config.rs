use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// How the contribution beyond the truncation radius is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    /// Equal-length blocks before the radius, extrapolated as a geometric sequence.
    Geometric,
    /// Dyadic blocks before the radius, extrapolated as a power law.
    PowerFit,
    /// The tail is taken to be zero.
    Zero,
}

impl FromStr for TailMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(TailMode::Geometric),
            "power_fit" => Ok(TailMode::PowerFit),
            "zero" => Ok(TailMode::Zero),
            other => Err(Error::Config(format!("unknown tail_estimate_mode `{other}`"))),
        }
    }
}

/// Absolute and relative tolerance of a single integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// Tolerances, truncation radii and budgets shared by every integral in the crate.
///
/// Inner integrals use `abs_tol`/`rel_tol`; integrals whose integrand is itself an
/// integral use the looser `outer_*` pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub outer_abs_tol: f64,
    pub outer_rel_tol: f64,
    pub truncation_radius: f64,
    pub singularity_exclusion: f64,
    pub max_subdivisions: usize,
    pub tail_estimate_mode: TailMode,
    /// Largest `|λ(±R)|` accepted as "vanishing at infinity".
    pub decay_tolerance: f64,
    /// A dyadic tail decaying slower than `t^(-1 - slack)` is reported as divergent.
    pub divergence_slack: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            outer_abs_tol: 1e-6,
            outer_rel_tol: 1e-4,
            truncation_radius: 1e3,
            singularity_exclusion: 1e-6,
            max_subdivisions: 2000,
            tail_estimate_mode: TailMode::PowerFit,
            decay_tolerance: 1e-4,
            divergence_slack: 0.1,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("outer_abs_tol", self.outer_abs_tol),
            ("outer_rel_tol", self.outer_rel_tol),
            ("truncation_radius", self.truncation_radius),
            ("singularity_exclusion", self.singularity_exclusion),
            ("decay_tolerance", self.decay_tolerance),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if self.singularity_exclusion >= self.truncation_radius {
            return Err(Error::Config(
                "singularity_exclusion must be smaller than truncation_radius".into(),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        if !(self.divergence_slack.is_finite() && self.divergence_slack >= 0.0) {
            return Err(Error::Config("divergence_slack must be non-negative".into()));
        }
        Ok(())
    }

    pub fn inner(&self) -> Tolerance {
        Tolerance { abs: self.abs_tol, rel: self.rel_tol }
    }

    pub fn outer(&self) -> Tolerance {
        Tolerance { abs: self.outer_abs_tol, rel: self.outer_rel_tol }
    }

    /// Doubles the resolution: halved tolerances and exclusion radius, doubled radius
    /// and subdivision budget.
    pub fn refined(&self) -> Self {
        QuadratureConfig {
            abs_tol: self.abs_tol / 2.0,
            rel_tol: self.rel_tol / 2.0,
            outer_abs_tol: self.outer_abs_tol / 2.0,
            outer_rel_tol: self.outer_rel_tol / 2.0,
            truncation_radius: self.truncation_radius * 2.0,
            singularity_exclusion: self.singularity_exclusion / 2.0,
            max_subdivisions: self.max_subdivisions * 2,
            ..self.clone()
        }
    }

    /// Parses a `key = value` file. Blank lines and `#` comments are ignored; every key
    /// is optional and falls back to [`QuadratureConfig::default`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = QuadratureConfig::default();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", number + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let real = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("`{key}` expects a number, got `{v}`")))
        };
        match key {
            "abs_tol" => self.abs_tol = real(value)?,
            "rel_tol" => self.rel_tol = real(value)?,
            "outer_abs_tol" => self.outer_abs_tol = real(value)?,
            "outer_rel_tol" => self.outer_rel_tol = real(value)?,
            "truncation_radius" => self.truncation_radius = real(value)?,
            "singularity_exclusion" => self.singularity_exclusion = real(value)?,
            "decay_tolerance" => self.decay_tolerance = real(value)?,
            "divergence_slack" => self.divergence_slack = real(value)?,
            "max_subdivisions" => {
                self.max_subdivisions = value
                    .parse()
                    .map_err(|_| Error::Config(format!("`max_subdivisions` expects an integer, got `{value}`")))?
            }
            "tail_estimate_mode" => self.tail_estimate_mode = value.parse()?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }
}
