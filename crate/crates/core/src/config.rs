//! Run configuration, read from TOML and validated before any computation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::FiniteGroup;
use crate::scalars::{parse_involution, parse_ring_kind, PhaseGroup, Ring, RingKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Mat,
    Fincat,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Mat => "mat",
            Backend::Fincat => "fincat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Verdicts, one JSON object per line.
    #[serde(default = "default_jsonl")]
    pub verdicts: PathBuf,
    /// Markdown summary.
    #[serde(default = "default_summary")]
    pub summary: PathBuf,
}

fn default_jsonl() -> PathBuf {
    PathBuf::from("verdicts.jsonl")
}

fn default_summary() -> PathBuf {
    PathBuf::from("summary.md")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { verdicts: default_jsonl(), summary: default_summary() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FincatConfig {
    #[serde(default = "default_group")]
    pub group: String,
    #[serde(default = "default_max_set_size")]
    pub max_set_size: usize,
}

fn default_group() -> String {
    "Z2".into()
}

fn default_max_set_size() -> usize {
    2
}

impl Default for FincatConfig {
    fn default() -> Self {
        FincatConfig { group: default_group(), max_set_size: default_max_set_size() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_backend")]
    pub backend: Backend,
    /// `gaussian`, `prime:<p>` or `integer`.
    #[serde(default = "default_ring")]
    pub ring: String,
    /// `conjugation` or `identity`.
    #[serde(default = "default_involution")]
    pub involution: String,
    /// Global phases as scalar literals; defaults to `±1, ±i` over the
    /// Gaussian rationals and to every unit over a prime field.
    #[serde(default)]
    pub phases: Option<Vec<String>>,
    #[serde(default = "default_dims_max")]
    pub dims_max: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Entry height bound for generated matrices.
    #[serde(default = "default_height")]
    pub height: u32,
    /// Law ids, or `["all"]`.
    #[serde(default = "default_suites")]
    pub suites: Vec<String>,
    /// Functors for the transport laws, by registry name.
    #[serde(default = "default_functors")]
    pub functors: Vec<String>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub fincat: FincatConfig,
}

fn default_backend() -> Backend {
    Backend::Mat
}

fn default_ring() -> String {
    "gaussian".into()
}

fn default_involution() -> String {
    "conjugation".into()
}

fn default_dims_max() -> usize {
    3
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_trials() -> usize {
    50
}

fn default_height() -> u32 {
    2
}

fn default_suites() -> Vec<String> {
    vec!["all".into()]
}

fn default_functors() -> Vec<String> {
    vec!["identity".into(), "conjugation".into()]
}

pub const MAX_DIMS: usize = 4;

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("all fields have defaults")
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        RunConfig::from_toml_str(&text)
    }

    pub fn ring(&self) -> Result<Ring, ConfigError> {
        let kind = parse_ring_kind(&self.ring).ok_or_else(|| ConfigError::Invalid(format!("unknown ring {:?}", self.ring)))?;
        let involution = parse_involution(&self.involution)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown involution {:?}", self.involution)))?;
        Ring::new(kind, involution).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn phase_group(&self) -> Result<PhaseGroup, ConfigError> {
        let ring = self.ring()?;
        match &self.phases {
            Some(list) => {
                let refs: Vec<&str> = list.iter().map(String::as_str).collect();
                PhaseGroup::parse(ring, &refs).map_err(|e| ConfigError::Invalid(format!("phases: {e}")))
            }
            None => match ring.kind() {
                RingKind::GaussianRational => Ok(PhaseGroup::gaussian_units(ring)),
                RingKind::PrimeField(_) => Ok(PhaseGroup::all_units(ring).expect("finite field")),
                RingKind::Integer => PhaseGroup::parse(ring, &["1", "-1"]).map_err(|e| ConfigError::Invalid(e.to_string())),
            },
        }
    }

    pub fn group(&self) -> Result<FiniteGroup, ConfigError> {
        FiniteGroup::by_name(&self.fincat.group).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Checks every field that can be checked without running anything.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.phase_group()?;
        if self.dims_max > MAX_DIMS {
            return Err(ConfigError::Invalid(format!("dims_max {} exceeds {MAX_DIMS}", self.dims_max)));
        }
        if self.seeds.is_empty() {
            return Err(ConfigError::Invalid("at least one seed is required".into()));
        }
        if self.trials == 0 {
            return Err(ConfigError::Invalid("trials must be positive".into()));
        }
        if self.backend == Backend::Fincat {
            // the size guard itself is enforced when the category is built
            self.group()?;
        }
        for name in &self.suites {
            if name != "all" && crate::harness::law(name).is_none() {
                return Err(ConfigError::Invalid(format!("unknown law {name:?}")));
            }
        }
        for name in &self.functors {
            if !crate::transport::REGISTRY.contains(&name.as_str()) && name != "ring-involution" {
                return Err(ConfigError::Invalid(format!("unknown functor {name:?}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.backend, Backend::Mat);
        assert_eq!(cfg.phase_group().unwrap().len(), 4);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(RunConfig::from_toml_str("colour = 3"), Err(ConfigError::Parse(_))));
        assert!(matches!(RunConfig::from_toml_str("[output]\nformat = \"x\""), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(matches!(RunConfig::from_toml_str("dims_max = 9"), Err(ConfigError::Invalid(_))));
        assert!(matches!(RunConfig::from_toml_str("phases = [\"1\", \"2\"]"), Err(ConfigError::Invalid(_))));
        assert!(matches!(RunConfig::from_toml_str("suites = [\"nope\"]"), Err(ConfigError::Invalid(_))));
        let f = "backend = \"fincat\"\n[fincat]\ngroup = \"S3\"";
        assert!(matches!(RunConfig::from_toml_str(f), Err(ConfigError::Invalid(_))));
    }
}
