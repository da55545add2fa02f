//! Physics-side integrators: conservative Velocity-Verlet, the
//! finite-difference underdamped Langevin step, and the overdamped
//! Ermak–McCammon step.
//!
//! The underdamped equation of motion with unit mass is
//! `dv/dt = f(x) - gamma v + R(t)`, with white noise calibrated by the
//! fluctuation–dissipation relation `<R_n^2> dt = 2 gamma T` in discrete
//! time. Writing the derivatives as finite differences and averaging the
//! friction over adjacent steps turns one step of this equation into exactly
//! one Momentum-optimizer update with `rho` and `lr` given by the maps in
//! [`crate::optim`]; that correspondence is what the equivalence tests pin
//! down.

use crate::error::{Error, Result};
use crate::num::{all_finite, Real};
use crate::objectives::Objective;
use crate::optim::{lr_from_rho, rho_from_gamma};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Friction, target temperature and time step of a Langevin simulation.
/// The particle mass is fixed at one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangevinConfig<F> {
    pub gamma: F,
    pub temperature: F,
    pub dt: F,
    /// Always one; kept as a named field so the formulas read like the
    /// equations they discretize.
    pub mass: F,
}

impl<F: Real> LangevinConfig<F> {
    pub fn new(gamma: F, temperature: F, dt: F) -> Result<Self> {
        if !(gamma >= F::zero() && gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("{gamma} must be nonnegative")));
        }
        if !(temperature >= F::zero() && temperature.is_finite()) {
            return Err(Error::invalid(
                "temperature",
                format!("{temperature} must be nonnegative"),
            ));
        }
        if !(dt > F::zero() && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("{dt} must be positive")));
        }
        Ok(LangevinConfig {
            gamma,
            temperature,
            dt,
            mass: F::one(),
        })
    }
}

/// Coordinates and velocities of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState<F> {
    pub x: Vec<F>,
    pub v: Vec<F>,
}

impl<F: Real> PhaseState<F> {
    pub fn new(x: Vec<F>, v: Vec<F>) -> Result<Self> {
        if x.len() != v.len() {
            return Err(Error::shape("PhaseState velocities", x.len(), v.len()));
        }
        Ok(PhaseState { x, v })
    }

    /// At rest at the given coordinates.
    pub fn at_rest(x: Vec<F>) -> Self {
        let v = vec![F::zero(); x.len()];
        PhaseState { x, v }
    }
}

/// Deterministic stream of independent standard Gaussian variates.
///
/// Two sources built from the same seed emit identical streams, which is how
/// the momentum-form and Langevin-form integrators are driven by shared
/// randomness in the equivalence tests.
#[derive(Debug, Clone)]
pub struct NoiseSource<F> {
    rng: ChaCha8Rng,
    seed: u64,
    position: u64,
    _scalar: std::marker::PhantomData<F>,
}

impl<F: Real> NoiseSource<F>
where
    StandardNormal: Distribution<F>,
{
    pub fn new(seed: u64) -> Self {
        NoiseSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            position: 0,
            _scalar: std::marker::PhantomData,
        }
    }

    /// Next standard normal variate (zero mean, unit variance).
    pub fn standard_normal(&mut self) -> F {
        self.position += 1;
        StandardNormal.sample(&mut self.rng)
    }

    pub fn fill(&mut self, out: &mut [F]) {
        for v in out {
            *v = self.standard_normal();
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of variates drawn so far.
    pub fn position(&self) -> u64 {
        self.position
    }
}

/// Per-step standard deviation of the discrete random force,
/// `sqrt(2 gamma T / dt)`.
pub fn noise_std<F: Real>(config: &LangevinConfig<F>) -> F {
    let two = F::from(2.0).unwrap();
    (two * config.gamma * config.temperature / config.dt).sqrt()
}

/// One Velocity-Verlet step of the conservative dynamics (`gamma = 0`,
/// no noise), unit mass:
///
/// ```text
/// x' = x + v dt + f(x) dt^2 / 2
/// v' = v + (f(x) + f(x')) dt / 2
/// ```
pub fn velocity_verlet_step<F: Real, O: Objective<F> + ?Sized>(
    state: &PhaseState<F>,
    objective: &O,
    dt: F,
    step: usize,
) -> Result<PhaseState<F>> {
    let half = F::from(0.5).unwrap();
    let f0 = objective.force(&state.x);
    if !all_finite(&f0) {
        return Err(Error::NonFinite {
            quantity: "force",
            step,
        });
    }
    let mut x1 = Vec::with_capacity(state.x.len());
    for i in 0..state.x.len() {
        x1.push(state.x[i] + state.v[i] * dt + f0[i] * dt * dt * half);
    }
    let f1 = objective.force(&x1);
    if !all_finite(&f1) {
        return Err(Error::NonFinite {
            quantity: "force",
            step,
        });
    }
    let mut v1 = Vec::with_capacity(state.v.len());
    for i in 0..state.v.len() {
        v1.push(state.v[i] + (f0[i] + f1[i]) * dt * half);
    }
    Ok(PhaseState { x: x1, v: v1 })
}

/// One finite-difference underdamped Langevin step in update-vector form.
///
/// With `rho` and `lr` from the friction maps and thermal noise
/// `R = noise_std * xi` sampled independently per coordinate:
///
/// ```text
/// delta_x' = rho * delta_x + (force + R) * lr
/// x'       = x + delta_x'
/// ```
///
/// At `noise_std = 0` this is one `momentum_step`; at `gamma = 0` it is the
/// conservative leapfrog (`rho = 1`, `lr = dt^2`); at `gamma = 2/dt` it is
/// one SGD step with `lr = dt^2/2`.
pub fn langevin_fd_step<F: Real>(
    x: &[F],
    delta_x: &[F],
    force: &[F],
    config: &LangevinConfig<F>,
    noise: &mut NoiseSource<F>,
) -> Result<(Vec<F>, Vec<F>)>
where
    StandardNormal: Distribution<F>,
{
    if delta_x.len() != x.len() {
        return Err(Error::shape("langevin_fd_step delta_x", x.len(), delta_x.len()));
    }
    if force.len() != x.len() {
        return Err(Error::shape("langevin_fd_step force", x.len(), force.len()));
    }
    let rho = rho_from_gamma(config.gamma, config.dt)?;
    let lr = lr_from_rho(rho, config.dt)?;
    let sigma = noise_std(config);
    let mut new_dx = Vec::with_capacity(x.len());
    let mut new_x = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let r = if sigma > F::zero() {
            sigma * noise.standard_normal()
        } else {
            F::zero()
        };
        let dx = rho * delta_x[i] + (force[i] + r) * lr;
        new_dx.push(dx);
        new_x.push(x[i] + dx);
    }
    Ok((new_x, new_dx))
}

/// One overdamped (Ermak–McCammon) step, valid for strictly positive
/// friction:
///
/// ```text
/// x' = x + dt f(x)/(m gamma) + sqrt(dt) sqrt(2T/(m gamma)) xi
/// ```
pub fn overdamped_step<F: Real, O: Objective<F> + ?Sized>(
    x: &[F],
    objective: &O,
    config: &LangevinConfig<F>,
    noise: &mut NoiseSource<F>,
) -> Result<Vec<F>>
where
    StandardNormal: Distribution<F>,
{
    if config.gamma <= F::zero() {
        return Err(Error::invalid(
            "gamma",
            "overdamped step requires strictly positive friction",
        ));
    }
    let two = F::from(2.0).unwrap();
    let m_gamma = config.mass * config.gamma;
    let drift = config.dt / m_gamma;
    let diffusion = config.dt.sqrt() * (two * config.temperature / m_gamma).sqrt();
    let f = objective.force(x);
    Ok(x.iter()
        .zip(&f)
        .map(|(&xi, &fi)| {
            let noise_term = if diffusion > F::zero() {
                diffusion * noise.standard_normal()
            } else {
                F::zero()
            };
            xi + drift * fi + noise_term
        })
        .collect())
}

/// Time-averaged `<x^2>` (mean over coordinates) of a finite-difference
/// Langevin trajectory started at rest at the origin, after discarding
/// `burn_in` steps. For a harmonic potential with stiffness `k` the
/// stationary value is `T/k`.
pub fn sample_equilibrium_moment<F: Real, O: Objective<F> + ?Sized>(
    objective: &O,
    config: &LangevinConfig<F>,
    steps: usize,
    burn_in: usize,
    noise: &mut NoiseSource<F>,
) -> Result<F>
where
    StandardNormal: Distribution<F>,
{
    if steps <= burn_in {
        return Err(Error::invalid("steps", "must exceed burn_in"));
    }
    let dim = objective.dimension();
    let mut x = vec![F::zero(); dim];
    let mut dx = vec![F::zero(); dim];
    let mut acc = F::zero();
    for step in 0..steps {
        let force = objective.force(&x);
        if !all_finite(&force) {
            return Err(Error::NonFinite {
                quantity: "force",
                step,
            });
        }
        (x, dx) = langevin_fd_step(&x, &dx, &force, config, noise)?;
        if step >= burn_in {
            acc += crate::num::l2_norm_sq(&x) / F::from(dim).unwrap();
        }
    }
    Ok(acc / F::from(steps - burn_in).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Quadratic;
    use approx::assert_relative_eq;

    #[test]
    fn config_validation() {
        assert!(LangevinConfig::new(1.0, 1.0, 0.1).is_ok());
        assert!(LangevinConfig::new(-1.0, 1.0, 0.1).is_err());
        assert!(LangevinConfig::new(1.0, -1.0, 0.1).is_err());
        assert!(LangevinConfig::new(1.0, 1.0, 0.0).is_err());
        assert_eq!(LangevinConfig::new(1.0, 1.0, 0.1).unwrap().mass, 1.0);
    }

    #[test]
    fn noise_source_is_deterministic_and_counts_draws() {
        let mut a = NoiseSource::<f64>::new(42);
        let mut b = NoiseSource::<f64>::new(42);
        let mut c = NoiseSource::<f64>::new(43);
        let xs: Vec<f64> = (0..32).map(|_| a.standard_normal()).collect();
        let ys: Vec<f64> = (0..32).map(|_| b.standard_normal()).collect();
        assert_eq!(xs, ys);
        assert_eq!(a.position(), 32);
        assert_eq!(a.seed(), 42);
        let zs: Vec<f64> = (0..32).map(|_| c.standard_normal()).collect();
        assert_ne!(xs, zs);
    }

    #[test]
    fn noise_std_limits_and_value() {
        let zero_gamma = LangevinConfig::new(0.0, 1.0, 0.1).unwrap();
        assert_eq!(noise_std(&zero_gamma), 0.0);
        let zero_t = LangevinConfig::new(1.0, 0.0, 0.1).unwrap();
        assert_eq!(noise_std(&zero_t), 0.0);
        let cfg = LangevinConfig::new(1.0, 1.0, 0.1).unwrap();
        assert_relative_eq!(noise_std(&cfg), 20.0_f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn verlet_free_particle() {
        struct Free;
        impl Objective<f64> for Free {
            fn dimension(&self) -> usize {
                1
            }
            fn value(&self, _: &[f64]) -> f64 {
                0.0
            }
            fn gradient(&self, _: &[f64]) -> Vec<f64> {
                vec![0.0]
            }
        }
        let s = PhaseState::new(vec![0.0], vec![1.0]).unwrap();
        let s = velocity_verlet_step(&s, &Free, 0.1, 0).unwrap();
        assert_relative_eq!(s.x[0], 0.1, max_relative = 1e-15);
        assert_relative_eq!(s.v[0], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn verlet_harmonic_hand_values() {
        let q = Quadratic::unit();
        let s = PhaseState::new(vec![1.0], vec![0.0]).unwrap();
        let s = velocity_verlet_step(&s, &q, 0.1, 0).unwrap();
        assert_relative_eq!(s.x[0], 0.995, max_relative = 1e-15);
        assert_relative_eq!(s.v[0], -0.09975, max_relative = 1e-13);
    }

    #[test]
    fn verlet_aborts_on_non_finite_force() {
        struct Bad;
        impl Objective<f64> for Bad {
            fn dimension(&self) -> usize {
                1
            }
            fn value(&self, _: &[f64]) -> f64 {
                f64::NAN
            }
            fn gradient(&self, _: &[f64]) -> Vec<f64> {
                vec![f64::NAN]
            }
        }
        let s = PhaseState::at_rest(vec![1.0]);
        let err = velocity_verlet_step(&s, &Bad, 0.1, 7).unwrap_err();
        assert!(matches!(err, Error::NonFinite { step: 7, .. }));
    }

    #[test]
    fn fd_step_rejects_excess_friction_and_bad_shapes() {
        let cfg = LangevinConfig::new(30.0, 0.0, 0.1).unwrap(); // gamma > 2/dt
        let mut noise = NoiseSource::new(0);
        assert!(langevin_fd_step(&[0.0], &[0.0], &[0.0], &cfg, &mut noise).is_err());
        let cfg = LangevinConfig::new(1.0, 0.0, 0.1).unwrap();
        assert!(langevin_fd_step(&[0.0], &[0.0, 1.0], &[0.0], &cfg, &mut noise).is_err());
        assert!(langevin_fd_step(&[0.0], &[0.0], &[], &cfg, &mut noise).is_err());
    }

    #[test]
    fn overdamped_deterministic_part() {
        let cfg = LangevinConfig::new(2.0, 0.0, 0.1).unwrap();
        let mut noise = NoiseSource::new(0);
        let q = Quadratic::unit(); // f(1) = -1
        let x = overdamped_step(&[1.0], &q, &cfg, &mut noise).unwrap();
        assert_relative_eq!(x[0], 0.95, max_relative = 1e-15);
        // no drift, no noise
        let x = overdamped_step(&[0.0], &q, &cfg, &mut noise).unwrap();
        assert_eq!(x[0], 0.0);
        assert_eq!(noise.position(), 0, "T = 0 must not consume noise");
    }

    #[test]
    fn overdamped_rejects_zero_friction() {
        let cfg = LangevinConfig::new(0.0, 1.0, 0.1).unwrap();
        let mut noise = NoiseSource::new(0);
        assert!(overdamped_step(&[1.0], &Quadratic::unit(), &cfg, &mut noise).is_err());
    }

    #[test]
    fn equilibrium_moment_zero_temperature_decays() {
        let cfg = LangevinConfig::new(1.0, 0.0, 0.01).unwrap();
        let mut noise = NoiseSource::new(5);
        let m =
            sample_equilibrium_moment(&Quadratic::unit(), &cfg, 20_000, 2_000, &mut noise).unwrap();
        assert!(m < 1e-6, "zero-temperature trajectory from origin stays put, got {m}");
        assert!(
            sample_equilibrium_moment(&Quadratic::unit(), &cfg, 10, 10, &mut noise).is_err()
        );
    }

    #[test]
    fn doubling_temperature_doubles_variance() {
        let mut m = [0.0_f64; 2];
        for (i, t) in [0.5, 1.0].into_iter().enumerate() {
            let cfg = LangevinConfig::new(1.0, t, 0.01).unwrap();
            let mut noise = NoiseSource::new(91);
            m[i] = sample_equilibrium_moment(&Quadratic::unit(), &cfg, 400_000, 40_000, &mut noise)
                .unwrap();
        }
        assert_relative_eq!(m[1] / m[0], 2.0, max_relative = 0.1);
    }
}
