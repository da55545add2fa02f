//! Optimizer kernels, the friction/momentum parameter maps, the cooling
//! schedule and whole-run drivers.

mod kernels;
mod run;
mod schedule;

pub use kernels::{
    adam_step, momentum_step, sgd_step, AdamConfig, AdamMoments, CoolMomentumConfig,
    OptimizerState,
};
pub use run::{adam_run, coolmomentum_run, sgd_run};
pub use schedule::{cooling_rate, cooling_rho, gamma_from_rho, lr_from_rho, rho_from_gamma};
