//! Pure optimizer transition kernels: SGD, Momentum and an Adam baseline.
//!
//! Sign convention: SGD and Adam take the gradient `dU/dx` and step downhill;
//! the momentum kernel takes the force `f = -dU/dx`, matching its reading as
//! a discretized equation of motion. The conversion between the two lives in
//! the objective contract, not here.

use crate::error::{Error, Result};
use crate::num::Real;

/// Parameter vector, previous update and iteration counter of an optimizer
/// run. Kernels consume a state and return the successor; a single run is
/// strictly sequential, independent runs share nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState<F> {
    /// Current parameters.
    pub x: Vec<F>,
    /// Previous update vector; same shape as `x`, zero at initialization.
    pub delta_x: Vec<F>,
    /// Iterations taken so far.
    pub n: usize,
}

impl<F: Real> OptimizerState<F> {
    /// Fresh state: `delta_x = 0`, `n = 0`.
    pub fn new(x: Vec<F>) -> Self {
        let dim = x.len();
        OptimizerState {
            x,
            delta_x: vec![F::zero(); dim],
            n: 0,
        }
    }

    pub fn dimension(&self) -> usize {
        self.x.len()
    }
}

/// Hyperparameters of a CoolMomentum run: time step, initial momentum
/// coefficient, cooling rate and the number of iterations the schedule is
/// sized for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolMomentumConfig<F> {
    pub dt: F,
    pub rho0: F,
    pub alpha: F,
    pub total_steps: usize,
}

impl<F: Real> CoolMomentumConfig<F> {
    /// Validated config with an explicit cooling rate. `alpha = 1` keeps
    /// `rho` constant (plain Momentum).
    pub fn new(dt: F, rho0: F, alpha: F, total_steps: usize) -> Result<Self> {
        if !(dt > F::zero() && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("{dt} must be positive")));
        }
        if !(rho0 >= F::zero() && rho0 < F::one()) {
            return Err(Error::invalid("rho0", format!("{rho0} not in [0, 1)")));
        }
        if !(alpha > F::zero() && alpha <= F::one()) {
            return Err(Error::invalid("alpha", format!("{alpha} not in (0, 1]")));
        }
        if total_steps == 0 {
            return Err(Error::invalid("total_steps", "must be positive"));
        }
        Ok(CoolMomentumConfig {
            dt,
            rho0,
            alpha,
            total_steps,
        })
    }

    /// Config with `alpha` chosen so the schedule reaches zero at
    /// `total_steps`, the annealing default.
    pub fn annealed(dt: F, rho0: F, total_steps: usize) -> Result<Self> {
        let alpha = super::schedule::cooling_rate(rho0, total_steps)?;
        Self::new(dt, rho0, alpha, total_steps)
    }
}

/// Adam baseline hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig<F> {
    pub lr: F,
    pub beta1: F,
    pub beta2: F,
    pub epsilon: F,
}

impl<F: Real> AdamConfig<F> {
    pub fn new(lr: F, beta1: F, beta2: F, epsilon: F) -> Result<Self> {
        if !(lr > F::zero()) {
            return Err(Error::invalid("lr", format!("{lr} must be positive")));
        }
        for (name, beta) in [("beta1", beta1), ("beta2", beta2)] {
            if !(beta >= F::zero() && beta < F::one()) {
                return Err(Error::invalid(name, format!("{beta} not in [0, 1)")));
            }
        }
        if !(epsilon > F::zero()) {
            return Err(Error::invalid("epsilon", format!("{epsilon} must be positive")));
        }
        Ok(AdamConfig {
            lr,
            beta1,
            beta2,
            epsilon,
        })
    }
}

impl<F: Real> Default for AdamConfig<F> {
    /// lr = 0.001, beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8.
    fn default() -> Self {
        AdamConfig {
            lr: F::from(1e-3).unwrap(),
            beta1: F::from(0.9).unwrap(),
            beta2: F::from(0.999).unwrap(),
            epsilon: F::from(1e-8).unwrap(),
        }
    }
}

/// First and second gradient moments of Adam; zero vectors at `n = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamMoments<F> {
    pub m: Vec<F>,
    pub v: Vec<F>,
}

impl<F: Real> AdamMoments<F> {
    pub fn zeros(dim: usize) -> Self {
        AdamMoments {
            m: vec![F::zero(); dim],
            v: vec![F::zero(); dim],
        }
    }
}

/// One SGD step: `x' = x - lr * grad`.
pub fn sgd_step<F: Real>(
    mut state: OptimizerState<F>,
    grad: &[F],
    lr: F,
) -> Result<OptimizerState<F>> {
    check_shape("sgd_step gradient", &state, grad)?;
    if !(lr > F::zero()) {
        return Err(Error::invalid("lr", format!("{lr} must be positive")));
    }
    for (i, g) in grad.iter().enumerate() {
        let dx = -lr * *g;
        state.delta_x[i] = dx;
        state.x[i] = state.x[i] + dx;
    }
    state.n += 1;
    Ok(state)
}

/// One Momentum step: `delta_x' = rho * delta_x + force * lr`,
/// `x' = x + delta_x'`. At `rho = 0` this is `sgd_step` with
/// `grad = -force` and the same `lr`.
pub fn momentum_step<F: Real>(
    mut state: OptimizerState<F>,
    force: &[F],
    rho: F,
    lr: F,
) -> Result<OptimizerState<F>> {
    check_shape("momentum_step force", &state, force)?;
    if !(rho >= F::zero() && rho <= F::one()) {
        return Err(Error::invalid("rho", format!("{rho} not in [0, 1]")));
    }
    if !(lr > F::zero()) {
        return Err(Error::invalid("lr", format!("{lr} must be positive")));
    }
    for (i, f) in force.iter().enumerate() {
        let dx = rho * state.delta_x[i] + *f * lr;
        state.delta_x[i] = dx;
        state.x[i] = state.x[i] + dx;
    }
    state.n += 1;
    Ok(state)
}

/// One Adam step with bias correction.
pub fn adam_step<F: Real>(
    mut state: OptimizerState<F>,
    mut moments: AdamMoments<F>,
    grad: &[F],
    config: &AdamConfig<F>,
) -> Result<(OptimizerState<F>, AdamMoments<F>)> {
    check_shape("adam_step gradient", &state, grad)?;
    if moments.m.len() != state.x.len() {
        return Err(Error::shape("adam_step moments", state.x.len(), moments.m.len()));
    }
    let t = F::from(state.n + 1).unwrap();
    let bias1 = F::one() - config.beta1.powf(t);
    let bias2 = F::one() - config.beta2.powf(t);
    for (i, g) in grad.iter().enumerate() {
        moments.m[i] = config.beta1 * moments.m[i] + (F::one() - config.beta1) * *g;
        moments.v[i] = config.beta2 * moments.v[i] + (F::one() - config.beta2) * *g * *g;
        let m_hat = moments.m[i] / bias1;
        let v_hat = moments.v[i] / bias2;
        let dx = -config.lr * m_hat / (v_hat.sqrt() + config.epsilon);
        state.delta_x[i] = dx;
        state.x[i] = state.x[i] + dx;
    }
    state.n += 1;
    Ok((state, moments))
}

fn check_shape<F: Real>(context: &'static str, state: &OptimizerState<F>, v: &[F]) -> Result<()> {
    if v.len() == state.x.len() {
        Ok(())
    } else {
        Err(Error::shape(context, state.x.len(), v.len()))
    }
}
