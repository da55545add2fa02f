//! Potential-energy / loss functions with exact gradients, plus stochastic
//! wrappers that model minibatch noise.

mod analytic;
mod dataset;
mod mlp;
mod noise;

pub use analytic::{DoubleWell, DoubleWellLandmarks, Quadratic, Rastrigin, Rosenbrock};
pub use dataset::SyntheticDataset;
pub use mlp::{mlp_param_count, MlpObjective};
pub use noise::GaussianNoisy;

use crate::num::Real;

/// A differentiable objective `U(x)` with an exact gradient.
///
/// `force` is the single place where the physics sign convention
/// `f(x) = -dU/dx` meets the machine-learning gradient convention; every
/// other API takes one or the other and says which.
pub trait Objective<F: Real> {
    fn dimension(&self) -> usize;

    /// Objective value `U(x)`.
    fn value(&self, x: &[F]) -> F;

    /// Exact gradient `dU/dx`.
    fn gradient(&self, x: &[F]) -> Vec<F>;

    /// Force `f(x) = -dU/dx`: the exact negative of [`Objective::gradient`].
    fn force(&self, x: &[F]) -> Vec<F> {
        let mut g = self.gradient(x);
        for v in &mut g {
            *v = -*v;
        }
        g
    }
}

impl<F: Real, O: Objective<F> + ?Sized> Objective<F> for &O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn value(&self, x: &[F]) -> F {
        (**self).value(x)
    }
    fn gradient(&self, x: &[F]) -> Vec<F> {
        (**self).gradient(x)
    }
    fn force(&self, x: &[F]) -> Vec<F> {
        (**self).force(x)
    }
}

/// A stochastic view of an objective: repeated draws of `(U_hat, dU_hat/dx)`
/// whose expectation is the exact quantity, alongside the exact quantities
/// themselves (full-batch evaluation for subsampling models).
///
/// Implementations own their noise stream; one instance drives one
/// trajectory at a time.
pub trait StochasticObjective<F: Real> {
    fn dimension(&self) -> usize;

    /// Exact (full-data) objective value.
    fn exact_value(&self, x: &[F]) -> F;

    /// Exact (full-data) gradient.
    fn exact_gradient(&self, x: &[F]) -> Vec<F>;

    /// One stochastic draw of `(U_hat(x), dU_hat/dx)`. A single call consumes
    /// a single noise sample (one minibatch, one noise vector).
    fn sample(&mut self, x: &[F]) -> (F, Vec<F>);

    /// One stochastic gradient draw.
    fn sample_gradient(&mut self, x: &[F]) -> Vec<F> {
        self.sample(x).1
    }

    /// One stochastic draw of `(U_hat, f_hat)` with `f_hat = -dU_hat/dx`.
    fn sample_force(&mut self, x: &[F]) -> (F, Vec<F>) {
        let (u, mut g) = self.sample(x);
        for v in &mut g {
            *v = -*v;
        }
        (u, g)
    }

    /// Reset the internal noise stream (and any subsampling state) so the
    /// draw sequence is a pure function of this seed.
    fn reseed(&mut self, seed: u64);
}
