//! Building stochastic objectives (and their summary metadata) from config.

use crate::config::ObjectiveSpec;
use anyhow::{bail, Context};
use coolmomentum::objectives::{
    DoubleWell, GaussianNoisy, MlpObjective, Objective, Quadratic, Rastrigin, Rosenbrock,
    StochasticObjective, SyntheticDataset,
};

/// Mixed into the run seed to derive the MLP weight-init seed, so
/// initialization and minibatch shuffling use distinct streams.
const INIT_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// A run-ready objective: the stochastic interface the drivers consume, the
/// start point, and what the summary needs to classify outcomes.
pub struct BuiltObjective {
    pub stochastic: Box<dyn StochasticObjective<f64>>,
    pub x0: Vec<f64>,
    /// Basin membership test for the global minimum, when the landscape has
    /// a well-defined one.
    pub basin: Option<Box<dyn Fn(&[f64]) -> bool>>,
}

pub fn build(spec: &ObjectiveSpec, seed: u64) -> anyhow::Result<BuiltObjective> {
    let sigma = spec.sigma.unwrap_or(0.0);
    match spec.name.as_str() {
        "quadratic" => {
            let stiffness = spec.stiffness.clone().unwrap_or_else(|| vec![1.0]);
            let dim = stiffness.len();
            let base = Quadratic::new(stiffness).context("objective.stiffness")?;
            let x0 = resolve_x0(spec, dim, || vec![1.0; dim])?;
            Ok(BuiltObjective {
                stochastic: Box::new(GaussianNoisy::new(base, sigma, seed)?),
                x0,
                // convex: everything drains to the global minimum
                basin: Some(Box::new(|_| true)),
            })
        }
        "double_well" => {
            let base = DoubleWell;
            let x0 = resolve_x0(spec, 1, || vec![1.0])?;
            let landmarks = DoubleWell::landmarks::<f64>(1e-4);
            Ok(BuiltObjective {
                stochastic: Box::new(GaussianNoisy::new(base, sigma, seed)?),
                x0,
                basin: Some(Box::new(move |x| landmarks.in_global_basin(x[0]))),
            })
        }
        "rosenbrock" => {
            let dim = spec.dim.unwrap_or(2);
            let base = Rosenbrock::new(dim).context("objective.dim")?;
            let x0 = resolve_x0(spec, dim, || {
                (0..dim).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect()
            })?;
            Ok(BuiltObjective {
                stochastic: Box::new(GaussianNoisy::new(base, sigma, seed)?),
                x0,
                basin: None,
            })
        }
        "rastrigin" => {
            let dim = spec.dim.unwrap_or(2);
            let base = Rastrigin::new(dim).context("objective.dim")?;
            let x0 = resolve_x0(spec, dim, || vec![3.0; dim])?;
            Ok(BuiltObjective {
                stochastic: Box::new(GaussianNoisy::new(base, sigma, seed)?),
                x0,
                basin: None,
            })
        }
        "mlp" => {
            let layers = spec
                .layers
                .clone()
                .ok_or_else(|| anyhow::anyhow!("mlp objective requires objective.layers"))?;
            let examples = spec.examples.unwrap_or(512);
            let data_seed = spec.data_seed.unwrap_or(0);
            let batch_size = spec.batch_size.unwrap_or(32);
            if layers.len() < 2 {
                bail!("objective.layers needs input and output sizes");
            }
            let dataset = SyntheticDataset::generate_with_label_noise(
                data_seed,
                examples,
                layers[0],
                *layers.last().unwrap(),
                spec.label_noise.unwrap_or(0.01),
            )?;
            let mlp = MlpObjective::new(layers, dataset, batch_size, seed)?;
            let x0 = match &spec.x0 {
                Some(x0) => x0.clone(),
                None => mlp.init_params(seed ^ INIT_SEED_SALT),
            };
            if x0.len() != Objective::dimension(&mlp) {
                bail!(
                    "objective.x0 has length {}, mlp has {} parameters",
                    x0.len(),
                    Objective::dimension(&mlp)
                );
            }
            Ok(BuiltObjective {
                stochastic: Box::new(mlp),
                x0,
                basin: None,
            })
        }
        other => bail!("unknown objective {other:?}"),
    }
}

fn resolve_x0(
    spec: &ObjectiveSpec,
    dim: usize,
    default: impl FnOnce() -> Vec<f64>,
) -> anyhow::Result<Vec<f64>> {
    match &spec.x0 {
        Some(x0) => {
            if x0.len() != dim {
                bail!("objective.x0 has length {}, expected {dim}", x0.len());
            }
            Ok(x0.clone())
        }
        None => Ok(default()),
    }
}
