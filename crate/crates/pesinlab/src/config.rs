//! Experiment configuration: one flat JSON object.

use std::path::Path;

use pesinlab_core::pesin::PesinParams;
use pesinlab_core::MapSystem;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("experiment '{experiment}' requires '{key}'")]
    Missing {
        experiment: &'static str,
        key: &'static str,
    },
    #[error("invalid value for '{key}': {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error("{0}")]
    System(pesinlab_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Lyapunov,
    PesinBlock,
    Shadow,
    Close,
    Census,
    Manifolds,
    Coverage,
    Livshitz,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Lyapunov => "lyapunov",
            Experiment::PesinBlock => "pesin-block",
            Experiment::Shadow => "shadow",
            Experiment::Close => "close",
            Experiment::Census => "census",
            Experiment::Manifolds => "manifolds",
            Experiment::Coverage => "coverage",
            Experiment::Livshitz => "livshitz",
        }
    }

    /// Keys that must be present for this experiment.
    pub fn required(self) -> &'static [&'static str] {
        match self {
            Experiment::Lyapunov => &["n"],
            Experiment::PesinBlock => &["K", "zeta"],
            Experiment::Shadow => &["delta", "T"],
            Experiment::Close => &["delta"],
            Experiment::Census => &["max_period"],
            Experiment::Manifolds => &["target_length"],
            Experiment::Coverage => &["target_length", "grid_n"],
            Experiment::Livshitz => &["observable", "N", "radius_grid"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub system: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(rename = "K_param", skip_serializing_if = "Option::is_none")]
    pub k_param: Option<f64>,

    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,

    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub min_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observable: Option<String>,
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

fn positive(key: &'static str, v: Option<f64>) -> Result<(), ConfigError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(invalid(key, "must be positive and finite")),
        _ => Ok(()),
    }
}

fn at_least(key: &'static str, v: Option<usize>, min: usize) -> Result<(), ConfigError> {
    match v {
        Some(x) if x < min => Err(invalid(key, format!("must be at least {min}"))),
        _ => Ok(()),
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Config = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn has(&self, key: &str) -> bool {
        match key {
            "n" => self.n.is_some(),
            "K" => self.block.is_some(),
            "zeta" => self.zeta.is_some(),
            "delta" => self.delta.is_some(),
            "T" => self.min_length.is_some(),
            "max_period" => self.max_period.is_some(),
            "target_length" => self.target_length.is_some(),
            "grid_n" => self.grid_n.is_some(),
            "observable" => self.observable.is_some(),
            "N" => self.count.is_some(),
            "radius_grid" => self.radius_grid.is_some(),
            _ => unreachable!("unknown required key {key}"),
        }
    }

    pub fn build_system(&self) -> Result<MapSystem, ConfigError> {
        let mut params = Vec::new();
        for (key, v) in [
            ("epsilon", self.epsilon),
            ("a", self.a),
            ("b", self.b),
            ("K_param", self.k_param),
        ] {
            if let Some(v) = v {
                params.push((key.to_string(), v));
            }
        }
        MapSystem::from_name(&self.system, &params).map_err(ConfigError::System)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let system = self.build_system()?;
        for key in self.experiment.required() {
            if !self.has(key) {
                return Err(ConfigError::Missing {
                    experiment: self.experiment.name(),
                    key,
                });
            }
        }
        positive("zeta", self.zeta)?;
        positive("delta", self.delta)?;
        positive("eta", self.eta)?;
        positive("theta", self.theta)?;
        positive("tol", self.tol)?;
        positive("target_length", self.target_length)?;
        positive("h", self.h)?;
        for (key, v) in [
            ("K", self.block),
            ("k", self.k),
            ("k_max", self.k_max),
            ("horizon", self.horizon),
            ("T", self.min_length),
            ("max_iter", self.max_iter),
            ("N", self.count),
            ("n", self.n),
            ("grid_n", self.grid_n),
            ("max_period", self.max_period),
            ("samples", self.samples),
        ] {
            at_least(key, v, 1)?;
        }
        if let Some(grid) = &self.radius_grid {
            if grid.is_empty() || grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                return Err(invalid("radius_grid", "needs positive radii"));
            }
        }
        if let Some(o) = &self.output {
            if o.is_empty() {
                return Err(invalid("output", "must not be empty"));
            }
        }
        match self.experiment {
            Experiment::Lyapunov => at_least("n", self.n, 10)?,
            Experiment::PesinBlock => {
                self.pesin_params().map_err(|e| invalid("K", e.to_string()))?;
                at_least("samples", self.samples, pesinlab_core::pesin::MIN_SAMPLES)?;
            }
            Experiment::Close => {
                let (lo, hi) = self.return_range();
                if lo < 2 || lo > hi {
                    return Err(invalid("T", "need 2 <= T <= N"));
                }
            }
            Experiment::Livshitz => {
                let name = self.observable.as_deref().unwrap_or_default();
                pesinlab_core::livshitz::Observable::from_name(&system, name)
                    .map_err(|_| invalid("observable", format!("unknown observable '{name}'")))?;
            }
            Experiment::Coverage if system.domain() != pesinlab_core::Domain::Torus => {
                return Err(invalid("system", "coverage needs a torus system"));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn output_prefix(&self) -> &str {
        self.output.as_deref().unwrap_or(self.experiment.name())
    }

    pub fn pesin_params(&self) -> pesinlab_core::Result<PesinParams> {
        let k_max = self.k_max.unwrap_or(10);
        PesinParams::new(
            self.block.unwrap_or(1),
            self.zeta.unwrap_or(0.0),
            k_max,
            self.horizon.unwrap_or(2 * k_max),
        )
    }

    /// `(T, N)` return-time window of the closing experiment.
    pub fn return_range(&self) -> (usize, usize) {
        (self.min_length.unwrap_or(20), self.count.unwrap_or(200))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Config, ConfigError> {
        let c: Config = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    #[test]
    fn minimal_configs() {
        assert!(parse(r#"{"system":"cat","experiment":"lyapunov","n":100}"#).is_ok());
        assert!(parse(
            r#"{"system":"perturbed_cat","epsilon":0.05,"experiment":"pesin-block","K":5,"zeta":0.8}"#
        )
        .is_ok());
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            parse(r#"{"system":"cat","experiment":"pesin-block","K":1}"#),
            Err(ConfigError::Missing { key: "zeta", .. })
        ));
        assert!(matches!(
            parse(r#"{"system":"cat","experiment":"lyapunov","n":100,"colour":1}"#),
            Err(ConfigError::Parse(_))
        ));
        assert!(matches!(
            parse(r#"{"system":"cat","epsilon":0.1,"experiment":"lyapunov","n":100}"#),
            Err(ConfigError::System(_))
        ));
        assert!(matches!(
            parse(r#"{"system":"henon","experiment":"coverage","target_length":1,"grid_n":8}"#),
            Err(ConfigError::Invalid { .. })
        ));
        assert!(parse(
            r#"{"system":"cat","experiment":"livshitz","observable":"nope","N":10,"radius_grid":[0.1]}"#
        )
        .is_err());
    }
}
