//! Whole-run drivers that tie kernels, schedules and stochastic objectives
//! together into a [`RunLog`].

use super::kernels::{adam_step, momentum_step, sgd_step, AdamConfig, AdamMoments, OptimizerState};
use super::schedule::{cooling_rho, lr_from_rho};
use super::CoolMomentumConfig;
use crate::error::{Error, Result};
use crate::num::{all_finite, l2_norm_sq, Real};
use crate::objectives::StochasticObjective;
use crate::runlog::{RunLog, StepRecord};

/// Run CoolMomentum for exactly `config.total_steps` iterations.
///
/// Each iteration draws one stochastic force sample, evaluates the cooling
/// schedule at the iteration index, recomputes the learning rate from the
/// current momentum coefficient, and applies one momentum update:
///
/// ```text
/// rho_n = max(0, 1 - (1 - rho0)/alpha^n)
/// lr_n  = dt^2 (1 + rho_n)/2
/// dx   <- rho_n dx + f_hat(x) lr_n
/// x    <- x + dx
/// ```
///
/// With `alpha = 1` the schedule is constant and this is plain Momentum.
/// The returned log is a pure function of `(objective kind, x0, config,
/// rng_seed)`; the objective's noise stream is reseeded with `rng_seed`
/// before the first iteration.
///
/// A non-finite force or parameter aborts the run with the failing step
/// index rather than letting the divergence propagate.
pub fn coolmomentum_run<F: Real, S: StochasticObjective<F> + ?Sized>(
    objective: &mut S,
    x0: &[F],
    config: &CoolMomentumConfig<F>,
    rng_seed: u64,
) -> Result<RunLog<F>> {
    if x0.len() != objective.dimension() {
        return Err(Error::shape("coolmomentum_run x0", objective.dimension(), x0.len()));
    }
    objective.reseed(rng_seed);
    let mut state = OptimizerState::new(x0.to_vec());
    let mut steps = Vec::with_capacity(config.total_steps);
    let mut updates = Vec::with_capacity(config.total_steps);
    let mut rho_zero_from = None;
    for n in 0..config.total_steps {
        let (loss, force) = objective.sample_force(&state.x);
        if !loss.is_finite() || !all_finite(&force) {
            return Err(Error::NonFinite {
                quantity: "force",
                step: n,
            });
        }
        let rho = cooling_rho(n, config.rho0, config.alpha)?;
        if rho == F::zero() && rho_zero_from.is_none() && n + 1 < config.total_steps {
            rho_zero_from = Some(n);
        }
        let lr = lr_from_rho(rho, config.dt)?;
        state = momentum_step(state, &force, rho, lr)?;
        if !all_finite(&state.x) {
            return Err(Error::NonFinite {
                quantity: "parameters",
                step: n,
            });
        }
        steps.push(StepRecord {
            step: n,
            rho,
            lr,
            loss,
            dx_sq_norm: l2_norm_sq(&state.delta_x),
        });
        updates.push(state.delta_x.clone());
    }
    Ok(RunLog {
        dt: config.dt,
        x0: x0.to_vec(),
        steps,
        updates,
        final_x: state.x,
        rho_zero_from,
    })
}

/// Run plain SGD on stochastic gradients for `steps` iterations.
///
/// Logged with `rho = 0` and, for temperature reporting, `dt = sqrt(2 lr)` —
/// the time step whose overdamped momentum form has this learning rate.
pub fn sgd_run<F: Real, S: StochasticObjective<F> + ?Sized>(
    objective: &mut S,
    x0: &[F],
    lr: F,
    steps: usize,
    rng_seed: u64,
) -> Result<RunLog<F>> {
    if x0.len() != objective.dimension() {
        return Err(Error::shape("sgd_run x0", objective.dimension(), x0.len()));
    }
    objective.reseed(rng_seed);
    let two = F::from(2.0).unwrap();
    let dt = (two * lr).sqrt();
    let mut state = OptimizerState::new(x0.to_vec());
    let mut records = Vec::with_capacity(steps);
    let mut updates = Vec::with_capacity(steps);
    for n in 0..steps {
        let (loss, grad) = objective.sample(&state.x);
        if !loss.is_finite() || !all_finite(&grad) {
            return Err(Error::NonFinite {
                quantity: "gradient",
                step: n,
            });
        }
        state = sgd_step(state, &grad, lr)?;
        if !all_finite(&state.x) {
            return Err(Error::NonFinite {
                quantity: "parameters",
                step: n,
            });
        }
        records.push(StepRecord {
            step: n,
            rho: F::zero(),
            lr,
            loss,
            dx_sq_norm: l2_norm_sq(&state.delta_x),
        });
        updates.push(state.delta_x.clone());
    }
    Ok(RunLog {
        dt,
        x0: x0.to_vec(),
        steps: records,
        updates,
        final_x: state.x,
        rho_zero_from: Some(0),
    })
}

/// Run the Adam baseline for `steps` iterations.
///
/// Adam has no time-step reading, so the log carries `dt = 1`: the rescaled
/// temperature column is then the mean squared update per parameter, which
/// is the quantity that stays comparable across optimizers.
pub fn adam_run<F: Real, S: StochasticObjective<F> + ?Sized>(
    objective: &mut S,
    x0: &[F],
    config: &AdamConfig<F>,
    steps: usize,
    rng_seed: u64,
) -> Result<RunLog<F>> {
    if x0.len() != objective.dimension() {
        return Err(Error::shape("adam_run x0", objective.dimension(), x0.len()));
    }
    objective.reseed(rng_seed);
    let mut state = OptimizerState::new(x0.to_vec());
    let mut moments = AdamMoments::zeros(x0.len());
    let mut records = Vec::with_capacity(steps);
    let mut updates = Vec::with_capacity(steps);
    for n in 0..steps {
        let (loss, grad) = objective.sample(&state.x);
        if !loss.is_finite() || !all_finite(&grad) {
            return Err(Error::NonFinite {
                quantity: "gradient",
                step: n,
            });
        }
        (state, moments) = adam_step(state, moments, &grad, config)?;
        if !all_finite(&state.x) {
            return Err(Error::NonFinite {
                quantity: "parameters",
                step: n,
            });
        }
        records.push(StepRecord {
            step: n,
            rho: F::zero(),
            lr: config.lr,
            loss,
            dx_sq_norm: l2_norm_sq(&state.delta_x),
        });
        updates.push(state.delta_x.clone());
    }
    Ok(RunLog {
        dt: F::one(),
        x0: x0.to_vec(),
        steps: records,
        updates,
        final_x: state.x,
        rho_zero_from: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{DoubleWell, GaussianNoisy, Quadratic};
    use approx::assert_relative_eq;

    fn noiseless<O: crate::objectives::Objective<f64>>(o: O) -> GaussianNoisy<O, f64> {
        GaussianNoisy::new(o, 0.0, 0).unwrap()
    }

    #[test]
    fn zero_force_is_a_fixed_point() {
        struct Flat;
        impl crate::objectives::Objective<f64> for Flat {
            fn dimension(&self) -> usize {
                2
            }
            fn value(&self, _: &[f64]) -> f64 {
                3.5
            }
            fn gradient(&self, _: &[f64]) -> Vec<f64> {
                vec![0.0, 0.0]
            }
        }
        let cfg = CoolMomentumConfig::annealed(0.1, 0.99, 200).unwrap();
        let log = coolmomentum_run(&mut noiseless(Flat), &[2.0, -1.0], &cfg, 1).unwrap();
        assert_eq!(log.final_x, vec![2.0, -1.0]);
        assert!(log.steps.iter().all(|s| s.dx_sq_norm == 0.0));
        assert_eq!(log.len(), 200);
    }

    // Independent scalar recurrence for the quadratic: the whole run is
    // delta <- rho_n delta - k x lr_n; x <- x + delta, iterated by hand.
    #[test]
    fn quadratic_contraction_matches_scalar_recurrence() {
        let steps = 10_000;
        let cfg = CoolMomentumConfig::annealed(0.1, 0.99, steps).unwrap();
        let mut obj = noiseless(Quadratic::unit());
        let log = coolmomentum_run(&mut obj, &[1.0], &cfg, 3).unwrap();

        let (mut x, mut dx) = (1.0_f64, 0.0_f64);
        for n in 0..steps {
            let rho = cooling_rho(n, cfg.rho0, cfg.alpha).unwrap();
            let lr = lr_from_rho(rho, cfg.dt).unwrap();
            dx = rho * dx + (-x) * lr;
            x += dx;
        }
        assert_eq!(log.final_x[0], x, "driver must replay the scalar recurrence exactly");
        assert!(x.abs() < 1e-2, "schedule must contract the oscillator, got {x}");
        assert!(x.abs() < 1.0);
    }

    #[test]
    fn equal_seeds_give_identical_logs() {
        let cfg = CoolMomentumConfig::annealed(0.1, 0.99, 500).unwrap();
        let mut a = GaussianNoisy::new(DoubleWell, 0.5, 0).unwrap();
        let mut b = GaussianNoisy::new(DoubleWell, 0.5, 99).unwrap();
        let la = coolmomentum_run(&mut a, &[1.0], &cfg, 7).unwrap();
        let lb = coolmomentum_run(&mut b, &[1.0], &cfg, 7).unwrap();
        assert_eq!(la, lb, "reseed must make runs a pure function of the seed");
        let lc = coolmomentum_run(&mut a, &[1.0], &cfg, 8).unwrap();
        assert_ne!(la.final_x, lc.final_x);
    }

    #[test]
    fn run_records_schedule_pointwise() {
        let cfg = CoolMomentumConfig::annealed(0.1, 0.99, 100).unwrap();
        let mut obj = noiseless(Quadratic::unit());
        let log = coolmomentum_run(&mut obj, &[1.0], &cfg, 1).unwrap();
        for rec in &log.steps {
            assert_eq!(rec.rho, cooling_rho(rec.step, cfg.rho0, cfg.alpha).unwrap());
            assert_eq!(rec.lr, lr_from_rho(rec.rho, cfg.dt).unwrap());
        }
        assert!(log.rho_zero_from.is_none(), "schedule hits zero only at the last step");
    }

    #[test]
    fn oversized_schedule_flags_quench_tail() {
        // alpha sized for 50 steps but run for 100: the tail is SGD-like.
        let alpha = crate::optim::cooling_rate(0.99, 50).unwrap();
        let cfg = CoolMomentumConfig::new(0.1, 0.99, alpha, 100).unwrap();
        let mut obj = noiseless(Quadratic::unit());
        let log = coolmomentum_run(&mut obj, &[1.0], &cfg, 1).unwrap();
        assert_eq!(log.rho_zero_from, Some(50));
        let half_dt_sq = 0.005;
        assert_relative_eq!(log.steps[70].lr, half_dt_sq, max_relative = 1e-12);
    }

    #[test]
    fn divergence_aborts_with_step_index() {
        // dt far too large for k = 1: lr k > 2(1+rho) overshoots and blows up.
        let cfg = CoolMomentumConfig::new(25.0, 0.0, 1.0, 10_000).unwrap();
        let mut obj = noiseless(Quadratic::unit());
        let err = coolmomentum_run(&mut obj, &[1.0], &cfg, 1).unwrap_err();
        match err {
            Error::NonFinite { step, .. } => assert!(step < 10_000),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn sgd_run_equals_rho_zero_momentum_run() {
        let lr = 0.005;
        let dt = (2.0_f64 * lr).sqrt();
        let cfg = CoolMomentumConfig::new(dt, 0.0, 1.0, 300).unwrap();
        let mut a = GaussianNoisy::new(DoubleWell, 0.5, 0).unwrap();
        let mut b = GaussianNoisy::new(DoubleWell, 0.5, 0).unwrap();
        let quench = coolmomentum_run(&mut a, &[1.0], &cfg, 11).unwrap();
        let sgd = sgd_run(&mut b, &[1.0], lr, 300, 11).unwrap();
        // same noise stream, and rho = 0 momentum with lr = dt^2/2 is SGD on
        // the negated force
        for (p, q) in quench.final_x.iter().zip(&sgd.final_x) {
            assert_relative_eq!(p, q, max_relative = 1e-12);
        }
    }

    #[test]
    fn adam_run_on_quadratic_descends() {
        let cfg = AdamConfig {
            lr: 0.05,
            ..AdamConfig::default()
        };
        let mut obj = noiseless(Quadratic::unit());
        let log = adam_run(&mut obj, &[1.0], &cfg, 400, 1).unwrap();
        assert!(log.final_x[0].abs() < 0.05, "got {}", log.final_x[0]);
        assert_eq!(log.dt, 1.0);
    }
}
