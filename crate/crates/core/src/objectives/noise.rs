//! Additive-Gaussian stochastic wrapper for analytic objectives.

use super::{Objective, StochasticObjective};
use crate::error::{Error, Result};
use crate::langevin::NoiseSource;
use crate::num::Real;
use rand_distr::{Distribution, StandardNormal};

/// Wraps an exact objective so each gradient query returns
/// `dU/dx + sigma * xi` with i.i.d. standard Gaussian `xi` per coordinate —
/// the zero-mean uncorrelated noise model of a minibatch estimate. Values
/// stay exact; with `sigma = 0` the wrapper reproduces the base objective
/// draw for draw.
#[derive(Debug, Clone)]
pub struct GaussianNoisy<O, F> {
    base: O,
    sigma: F,
    noise: NoiseSource<F>,
}

impl<O, F: Real> GaussianNoisy<O, F>
where
    StandardNormal: Distribution<F>,
{
    pub fn new(base: O, sigma: F, seed: u64) -> Result<Self> {
        if !(sigma >= F::zero() && sigma.is_finite()) {
            return Err(Error::invalid("sigma", format!("{sigma} must be nonnegative")));
        }
        Ok(GaussianNoisy {
            base,
            sigma,
            noise: NoiseSource::new(seed),
        })
    }

    pub fn base(&self) -> &O {
        &self.base
    }
}

impl<F: Real, O: Objective<F>> StochasticObjective<F> for GaussianNoisy<O, F>
where
    StandardNormal: Distribution<F>,
{
    fn dimension(&self) -> usize {
        self.base.dimension()
    }

    fn exact_value(&self, x: &[F]) -> F {
        self.base.value(x)
    }

    fn exact_gradient(&self, x: &[F]) -> Vec<F> {
        self.base.gradient(x)
    }

    fn sample(&mut self, x: &[F]) -> (F, Vec<F>) {
        let mut g = self.base.gradient(x);
        if self.sigma > F::zero() {
            for gi in &mut g {
                *gi = *gi + self.sigma * self.noise.standard_normal();
            }
        }
        (self.base.value(x), g)
    }

    fn reseed(&mut self, seed: u64) {
        self.noise = NoiseSource::new(seed);
    }
}
