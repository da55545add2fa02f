//! CoolMomentum: simulated annealing through a cooled momentum coefficient.
//!
//! The Momentum optimizer update `dx <- rho dx + f lr` is one
//! finite-difference step of underdamped Langevin dynamics; the friction
//! coefficient and the momentum coefficient are two readings of the same
//! dial, `rho = (1 - gamma dt/2)/(1 + gamma dt/2)`. Annealing — slow cooling
//! into the global minimum — then needs no temperature parameter at all:
//! lower `rho` from `rho0` to zero over the run and recompute the learning
//! rate `lr = dt^2 (1 + rho)/2` as you go. This crate implements that
//! optimizer, the Langevin-side integrators it corresponds to, objectives to
//! exercise it on, and the kinetic-temperature diagnostics that distinguish
//! annealing from quenching.
//!
//! All numerics are generic over the scalar (`f32` or `f64`) through
//! [`num::Real`]; f64 is the precision every stated tolerance is calibrated
//! for, and the [`Scalar`] alias plus the `*64` type aliases below pin the
//! concrete types most callers want.

pub mod error;
pub mod gradcheck;
pub mod langevin;
pub mod num;
pub mod objectives;
pub mod optim;
pub mod runlog;
pub mod thermometry;

pub use error::{Error, Result};

/// Default scalar: all documented tolerances assume this precision.
pub type Scalar = f64;

/// f64 optimizer state.
pub type OptimizerState64 = optim::OptimizerState<Scalar>;
/// f64 CoolMomentum hyperparameters.
pub type CoolMomentumConfig64 = optim::CoolMomentumConfig<Scalar>;
/// f64 Adam hyperparameters.
pub type AdamConfig64 = optim::AdamConfig<Scalar>;
/// f64 Langevin simulation parameters.
pub type LangevinConfig64 = langevin::LangevinConfig<Scalar>;
/// f64 Gaussian noise stream.
pub type NoiseSource64 = langevin::NoiseSource<Scalar>;
/// f64 run record.
pub type RunLog64 = runlog::RunLog<Scalar>;
