//! The momentum-form and Langevin-form integrators must trace the same
//! trajectory when driven by the same force and noise stream.

use coolmomentum::langevin::{langevin_fd_step, velocity_verlet_step, LangevinConfig, NoiseSource, PhaseState};
use coolmomentum::objectives::{DoubleWell, Objective, Quadratic};
use coolmomentum::optim::{lr_from_rho, momentum_step, rho_from_gamma, sgd_step, OptimizerState};
use coolmomentum::thermometry::kinetic_energy;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Relative discrepancy with a unit floor, so trajectories crossing zero do
/// not inflate the ratio.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Drive momentum_step and langevin_fd_step with a shared force and noise
/// stream for `steps` iterations; return the worst per-step discrepancy.
fn worst_discrepancy(gamma: f64, temperature: f64, dt: f64, steps: usize, seed: u64) -> f64 {
    let config = LangevinConfig::new(gamma, temperature, dt).unwrap();
    let rho = rho_from_gamma(gamma, dt).unwrap();
    let lr = lr_from_rho(rho, dt).unwrap();
    let sigma = coolmomentum::langevin::noise_std(&config);
    let well = DoubleWell;

    let mut momentum = OptimizerState::new(vec![1.0]);
    let mut lx = vec![1.0];
    let mut ldx = vec![0.0];
    let mut momentum_noise = NoiseSource::<f64>::new(seed);
    let mut langevin_noise = NoiseSource::<f64>::new(seed);

    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        let mut f_hat = well.force(&momentum.x);
        if sigma > 0.0 {
            for f in &mut f_hat {
                *f += sigma * momentum_noise.standard_normal();
            }
        }
        momentum = momentum_step(momentum, &f_hat, rho, lr).unwrap();

        let force = well.force(&lx);
        (lx, ldx) = langevin_fd_step(&lx, &ldx, &force, &config, &mut langevin_noise).unwrap();

        worst = worst.max(rel(momentum.x[0], lx[0]));
    }
    worst
}

#[test]
fn momentum_equals_langevin_without_noise() {
    // any (gamma, dt, T = 0) with a shared force sequence
    for (gamma, dt) in [(0.0, 0.1), (0.5, 0.1), (1.0, 0.05), (19.9, 0.1), (3.0, 0.3)] {
        let worst = worst_discrepancy(gamma, 0.0, dt, 10_000, 7);
        assert!(
            worst < 1e-12,
            "gamma = {gamma}, dt = {dt}: worst per-step discrepancy {worst}"
        );
    }
}

#[test]
fn momentum_equals_langevin_with_shared_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20 {
        let dt = rng.random_range(0.01..0.3);
        let gamma = rng.random_range(0.0..2.0 / dt);
        let temperature = rng.random_range(0.0..1.0);
        let worst = worst_discrepancy(gamma, temperature, dt, 10_000, 100 + case);
        assert!(
            worst < 1e-12,
            "case {case}: gamma = {gamma}, dt = {dt}, T = {temperature}: discrepancy {worst}"
        );
    }
}

#[test]
fn conservative_limit_is_pure_momentum() {
    // gamma = 0, T = 0 reduces to momentum with rho = 1, lr = dt^2
    let dt = 0.1;
    let config = LangevinConfig::new(0.0, 0.0, dt).unwrap();
    let mut noise = NoiseSource::<f64>::new(0);
    let well = DoubleWell;
    let mut state = OptimizerState::new(vec![0.7]);
    let (mut x, mut dx) = (vec![0.7], vec![0.0]);
    for _ in 0..500 {
        let f = well.force(&state.x);
        state = momentum_step(state, &f, 1.0, dt * dt).unwrap();
        let f = well.force(&x);
        (x, dx) = langevin_fd_step(&x, &dx, &f, &config, &mut noise).unwrap();
        assert_eq!(state.x[0], x[0]);
    }
    assert_eq!(noise.position(), 0, "conservative run must not draw noise");
}

#[test]
fn overdamped_limit_is_sgd() {
    // gamma = 2/dt, T = 0 reduces to sgd with lr = dt^2/2 on the gradient
    let dt = 0.1;
    let config = LangevinConfig::new(2.0 / dt, 0.0, dt).unwrap();
    let mut noise = NoiseSource::<f64>::new(0);
    let well = DoubleWell;
    let mut state = OptimizerState::new(vec![0.7]);
    let (mut x, mut dx) = (vec![0.7], vec![0.0]);
    for _ in 0..500 {
        let g = well.gradient(&state.x);
        state = sgd_step(state, &g, dt * dt / 2.0).unwrap();
        let f = well.force(&x);
        (x, dx) = langevin_fd_step(&x, &dx, &f, &config, &mut noise).unwrap();
        let d = rel(state.x[0], x[0]);
        assert!(d < 1e-13, "sgd vs overdamped fd step: {d}");
    }
}

/// Independent route for one finite-difference step, solved directly from
/// the symmetric-friction discretization without going through the
/// (rho, lr) parameter maps:
/// `dx' = ((1 - g dt/2) dx + f dt^2) / (1 + g dt/2)`.
fn fd_step_direct(x: &mut [f64], dx: &mut [f64], force: &[f64], gamma: f64, dt: f64) {
    let numer = 1.0 - gamma * dt / 2.0;
    let denom = 1.0 + gamma * dt / 2.0;
    for i in 0..x.len() {
        dx[i] = (numer * dx[i] + force[i] * dt * dt) / denom;
        x[i] += dx[i];
    }
}

#[test]
fn fd_step_agrees_with_direct_denominator_form() {
    // Two algebraically identical routes differ only by rounding; the
    // per-step coefficient differences are ~1 ulp and their accumulation
    // grows with the horizon, so the bound is tight for short runs and
    // correspondingly looser for long ones.
    for (gamma, dt) in [(0.3, 0.1), (1.0, 0.05), (10.0, 0.1), (0.01, 0.2)] {
        let config = LangevinConfig::new(gamma, 0.0, dt).unwrap();
        let mut noise = NoiseSource::<f64>::new(0);
        let well = DoubleWell;
        let (mut ax, mut adx) = (vec![1.0], vec![0.0]);
        let (mut bx, mut bdx) = (vec![1.0], vec![0.0]);
        for step in 0..10_000 {
            let f = well.force(&ax);
            (ax, adx) = langevin_fd_step(&ax, &adx, &f, &config, &mut noise).unwrap();
            let f = well.force(&bx);
            fd_step_direct(&mut bx, &mut bdx, &f, gamma, dt);
            let d = rel(ax[0], bx[0]);
            let bound = if step < 100 { 1e-13 } else { 1e-9 };
            assert!(d < bound, "gamma={gamma} dt={dt} step={step}: {d}");
        }
    }
}

#[test]
fn velocity_verlet_conserves_energy_on_harmonic() {
    let oscillator = Quadratic::<f64>::unit();
    let dt = 0.01;
    let steps = 100_000;
    let mut state = PhaseState::new(vec![1.0], vec![0.0]).unwrap();
    let e0 = oscillator.value(&state.x) + kinetic_energy(&state.v, 1.0);
    let window = steps / 10;
    let mut worst: f64 = 0.0;
    let mut head_mean = 0.0;
    let mut tail_mean = 0.0;
    for step in 0..steps {
        state = velocity_verlet_step(&state, &oscillator, dt, step).unwrap();
        let e = oscillator.value(&state.x) + kinetic_energy(&state.v, 1.0);
        worst = worst.max(((e - e0) / e0).abs());
        if step < window {
            head_mean += e;
        } else if step >= steps - window {
            tail_mean += e;
        }
    }
    head_mean /= window as f64;
    tail_mean /= window as f64;
    assert!(worst < 1e-4, "energy deviation {worst}");
    // the measured energy oscillates within an O((w dt)^2) band; secular
    // drift would separate the window means
    assert!(
        ((tail_mean - head_mean) / e0).abs() < 1e-6,
        "drift {}",
        (tail_mean - head_mean) / e0
    );
}

#[test]
fn conservative_fd_scheme_conserves_energy_on_harmonic() {
    // gamma = 0, T = 0 finite-difference scheme; the update-form velocity is
    // staggered by half a step, so the energy reading uses the
    // time-centered estimate v_n = (x_{n+1} - x_{n-1}) / (2 dt).
    let oscillator = Quadratic::<f64>::unit();
    let dt = 0.01;
    let steps = 100_000;
    let config = LangevinConfig::new(0.0, 0.0, dt).unwrap();
    let mut noise = NoiseSource::<f64>::new(0);
    let (mut x, mut dx) = (vec![1.0], vec![0.0]);
    let mut previous = x[0];
    let mut current: Option<f64> = None;
    let mut e0 = f64::NAN;
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        let f = oscillator.force(&x);
        (x, dx) = langevin_fd_step(&x, &dx, &f, &config, &mut noise).unwrap();
        if let Some(mid) = current {
            let v_centered = (x[0] - previous) / (2.0 * dt);
            let e = oscillator.value(&[mid]) + kinetic_energy(&[v_centered], 1.0);
            if e0.is_nan() {
                e0 = e;
            }
            worst = worst.max(((e - e0) / e0).abs());
            previous = mid;
        }
        current = Some(x[0]);
    }
    assert!(worst < 1e-4, "energy deviation {worst}");
}
