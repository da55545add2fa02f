//! Per-step records of an optimizer run.

use crate::num::Real;

/// One optimizer iteration: schedule values, the sampled loss at the
/// pre-update parameters, and the squared norm of the update applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord<F> {
    pub step: usize,
    pub rho: F,
    pub lr: F,
    pub loss: F,
    pub dx_sq_norm: F,
}

/// Complete record of one run. The parameter trajectory is not stored
/// explicitly: it is reconstructed exactly by replaying the logged update
/// vectors from `x0` with the same sequential additions the run performed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog<F> {
    /// Time step the run was driven with (1.0 for optimizers that have no
    /// time-step reading; see the temperature docs).
    pub dt: F,
    /// Initial parameters.
    pub x0: Vec<F>,
    /// One record per iteration, in order.
    pub steps: Vec<StepRecord<F>>,
    /// Full update vector of every iteration, in order.
    pub updates: Vec<Vec<F>>,
    /// Final parameters.
    pub final_x: Vec<F>,
    /// First iteration at which the cooling schedule clamped to zero, when
    /// that happened before the final iteration; from there on the run is an
    /// SGD-style quench with `lr = dt^2/2`.
    pub rho_zero_from: Option<usize>,
}

impl<F: Real> RunLog<F> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.x0.len()
    }

    /// Iterate over the parameter vectors `x_1, x_2, ..., x_S` (post-update,
    /// one per step), reconstructed from `x0` and the update log.
    pub fn trajectory(&self) -> TrajectoryIter<'_, F> {
        TrajectoryIter {
            x: self.x0.clone(),
            updates: self.updates.iter(),
        }
    }
}

pub struct TrajectoryIter<'a, F> {
    x: Vec<F>,
    updates: std::slice::Iter<'a, Vec<F>>,
}

impl<F: Real> Iterator for TrajectoryIter<'_, F> {
    type Item = Vec<F>;

    fn next(&mut self) -> Option<Vec<F>> {
        let dx = self.updates.next()?;
        for (xi, di) in self.x.iter_mut().zip(dx) {
            *xi = *xi + *di;
        }
        Some(self.x.clone())
    }
}
