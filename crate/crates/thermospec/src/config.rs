//! JSON run configuration with field-path validation.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thermospec_core::fit::{FitOptions, Window, DEFAULT_DEGREE, DEFAULT_POINTS};
use thermospec_core::{BcKind, DomainSpec, MaterialParams, MetricChart};

/// A validation failure located by a dotted field path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experimental {
    #[serde(default)]
    pub allow_coupled: bool,
    #[serde(default)]
    pub override_tail_guard: bool,
}

/// The configuration document as written on disk.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub params: MaterialParams,
    pub domain: String,
    #[serde(default = "default_bc")]
    pub bc: BcKind,
    #[serde(default)]
    pub chart: Option<String>,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default)]
    pub t_grid: Option<TGrid>,
    pub cutoff: f64,
    /// Grid spacing for the finite-difference solver.
    #[serde(default)]
    pub fd_spacing: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub experimental: Experimental,
}

fn default_bc() -> BcKind {
    BcKind::Dirichlet
}

fn default_degree() -> usize {
    DEFAULT_DEGREE
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub bc: Option<BcKind>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub alpha: Option<f64>,
    pub domain: Option<String>,
    pub cutoff: Option<f64>,
    pub degree: Option<usize>,
    pub out: Option<PathBuf>,
    pub allow_coupled: bool,
    pub override_tail_guard: bool,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: MaterialParams,
    pub domain: DomainSpec,
    pub bc: BcKind,
    pub chart: Option<MetricChart>,
    pub degree: usize,
    pub t_grid: Option<TGrid>,
    pub cutoff: f64,
    pub fd_spacing: Option<f64>,
    pub out: Option<PathBuf>,
    pub experimental: Experimental,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { String::from("(root)") } else { path };
            ConfigError::new(path, e.into_inner().to_string())
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(bc) = o.bc {
            self.bc = bc;
        }
        if let Some(v) = o.lambda {
            self.params.lambda = v;
        }
        if let Some(v) = o.mu {
            self.params.mu = v;
        }
        if let Some(v) = o.alpha {
            self.params.alpha = v;
        }
        if let Some(d) = &o.domain {
            self.domain = d.clone();
        }
        if let Some(c) = o.cutoff {
            self.cutoff = c;
        }
        if let Some(d) = o.degree {
            self.degree = d;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        self.experimental.allow_coupled |= o.allow_coupled;
        self.experimental.override_tail_guard |= o.override_tail_guard;
    }

    pub fn validate(self) -> Result<RunConfig, ConfigError> {
        self.params
            .validate()
            .map_err(|e| ConfigError::new(format!("params.{}", e.field()), e.to_string()))?;
        if !self.params.is_decoupled() && !self.experimental.allow_coupled {
            let field = if self.params.beta != 0.0 { "beta" } else { "omega" };
            return Err(ConfigError::new(
                format!("params.{field}"),
                "coupled parameters need experimental.allow_coupled (--allow-coupled)",
            ));
        }
        let domain: DomainSpec = self.domain.parse().map_err(|e: &str| ConfigError::new("domain", e))?;
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(ConfigError::new("cutoff", "must be positive and finite"));
        }
        if self.degree < 1 {
            return Err(ConfigError::new("degree", "must be at least 1"));
        }
        if let Some(g) = &self.t_grid {
            if !(g.t_min > 0.0 && g.t_max > g.t_min && g.t_max.is_finite()) {
                return Err(ConfigError::new("t_grid.t_min", "need 0 < t_min < t_max"));
            }
            if g.points < self.degree + 2 {
                return Err(ConfigError::new("t_grid.points", "need at least degree + 2 points"));
            }
        }
        if let Some(h) = self.fd_spacing {
            if !(h > 0.0 && h.is_finite()) {
                return Err(ConfigError::new("fd_spacing", "must be positive"));
            }
        }
        let chart = match &self.chart {
            None => None,
            Some(id) => {
                let chart = MetricChart::from_id(id).map_err(|e| ConfigError::new("chart", e.to_string()))?;
                if chart.dim() != domain.dim() {
                    return Err(ConfigError::new(
                        "chart",
                        format!("chart dimension {} does not match domain dimension {}", chart.dim(), domain.dim()),
                    ));
                }
                Some(chart)
            }
        };
        Ok(RunConfig {
            params: self.params,
            domain,
            bc: self.bc,
            chart,
            degree: self.degree,
            t_grid: self.t_grid,
            cutoff: self.cutoff,
            fd_spacing: self.fd_spacing,
            out: self.out,
            experimental: self.experimental,
        })
    }
}

impl RunConfig {
    pub fn from_json(text: &str, overrides: &Overrides) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::from_json(text)?;
        raw.apply(overrides);
        raw.validate()
    }

    pub fn load(path: &Path, overrides: &Overrides) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("reading {}: {e}", path.display()))?;
        Self::from_json(&text, overrides).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            degree: self.degree,
            points: self.t_grid.as_ref().map_or(DEFAULT_POINTS, |g| g.points),
            window: self.t_grid.as_ref().map(|g| Window {
                t_min: g.t_min,
                t_max: g.t_max,
            }),
            override_tail_guard: self.experimental.override_tail_guard,
            ..FitOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DISK: &str = r#"{"params": {"lambda": 0, "mu": 1, "alpha": 1}, "domain": "disk:1", "cutoff": 100}"#;

    #[test]
    fn defaults_and_overrides() {
        let cfg = RunConfig::from_json(DISK, &Overrides::default()).unwrap();
        assert_eq!(cfg.bc, BcKind::Dirichlet);
        assert_eq!(cfg.degree, 3);
        let o = Overrides {
            bc: Some(BcKind::Neumann),
            mu: Some(2.0),
            ..Overrides::default()
        };
        let cfg = RunConfig::from_json(DISK, &o).unwrap();
        assert_eq!(cfg.bc, BcKind::Neumann);
        assert_eq!(cfg.params.mu, 2.0);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = DISK.replace("\"mu\": 1", "\"mu\": -1");
        assert_eq!(RunConfig::from_json(&bad, &Overrides::default()).unwrap_err().path, "params.mu");
        let typo = DISK.replace("\"alpha\"", "\"alpah\"");
        assert!(RunConfig::from_json(&typo, &Overrides::default()).unwrap_err().path.starts_with("params"));
        let wrong_type = DISK.replace("100", "\"big\"");
        assert_eq!(RunConfig::from_json(&wrong_type, &Overrides::default()).unwrap_err().path, "cutoff");
        let chart = DISK.replace("\"cutoff\"", "\"chart\": \"sphere-3\", \"cutoff\"");
        assert_eq!(RunConfig::from_json(&chart, &Overrides::default()).unwrap_err().path, "chart");
        let coupled = DISK.replace("\"alpha\": 1", "\"alpha\": 1, \"beta\": 0.5");
        assert_eq!(RunConfig::from_json(&coupled, &Overrides::default()).unwrap_err().path, "params.beta");
        let allowed = Overrides {
            allow_coupled: true,
            ..Overrides::default()
        };
        assert!(RunConfig::from_json(&coupled, &allowed).is_ok());
    }
}
