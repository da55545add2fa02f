//! Experiment configuration: a TOML file with `[objective]`, `[optimizer]`
//! and `[run]` tables. The grammar is documented in the repository README;
//! serialization is idempotent so a persisted config re-runs byte-for-byte.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const OBJECTIVE_NAMES: &[&str] = &["quadratic", "double_well", "rosenbrock", "rastrigin", "mlp"];
pub const OPTIMIZER_NAMES: &[&str] = &["sgd", "momentum", "adam", "coolmomentum"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub objective: ObjectiveSpec,
    pub optimizer: OptimizerSpec,
    pub run: RunSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSpec {
    pub name: String,
    /// Additive Gaussian gradient-noise std for analytic objectives.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Stiffness vector (quadratic).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stiffness: Option<Vec<f64>>,
    /// Dimension (rosenbrock, rastrigin).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Layer sizes including input and output (mlp).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<usize>>,
    /// Dataset rows (mlp).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub examples: Option<usize>,
    /// Dataset generator seed (mlp); shared by all run seeds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_seed: Option<u64>,
    /// Minibatch size (mlp).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    /// Label-noise std of the synthetic dataset (mlp); default 0.01.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label_noise: Option<f64>,
    /// Start point; objective-specific default when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    pub name: String,
    /// Time step (momentum, coolmomentum).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Initial momentum coefficient (coolmomentum).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho0: Option<f64>,
    /// Cooling rate; default `(1 - rho0)^(1/steps)` (coolmomentum).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Constant momentum coefficient (momentum).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Learning rate (sgd, adam).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub steps: usize,
    pub steps_per_epoch: usize,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub granularity: Granularity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Granularity {
    #[default]
    #[serde(rename = "per-step")]
    PerStep,
    #[serde(rename = "per-epoch")]
    PerEpoch,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).context("parsing config")?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !OBJECTIVE_NAMES.contains(&self.objective.name.as_str()) {
            bail!(
                "unknown objective {:?}; valid names: {}",
                self.objective.name,
                OBJECTIVE_NAMES.join(", ")
            );
        }
        if !OPTIMIZER_NAMES.contains(&self.optimizer.name.as_str()) {
            bail!(
                "unknown optimizer {:?}; valid names: {}",
                self.optimizer.name,
                OPTIMIZER_NAMES.join(", ")
            );
        }
        if self.run.steps == 0 {
            bail!("run.steps must be positive");
        }
        if self.run.steps_per_epoch == 0 || self.run.steps % self.run.steps_per_epoch != 0 {
            bail!(
                "run.steps_per_epoch must divide run.steps ({} / {})",
                self.run.steps,
                self.run.steps_per_epoch
            );
        }
        if self.run.seeds.is_empty() {
            bail!("run.seeds must not be empty");
        }
        let mut sorted = self.run.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.run.seeds.len() {
            bail!("run.seeds contains duplicates");
        }
        if self.objective.name == "mlp" && self.objective.sigma.is_some() {
            bail!("objective.sigma does not apply to the mlp objective (noise comes from minibatch subsampling)");
        }
        Ok(())
    }
}
