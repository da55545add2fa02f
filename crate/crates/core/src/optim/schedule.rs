//! Momentum/friction parameter maps and the cooling schedule.
//!
//! A momentum update with coefficient `rho` and learning rate `lr` is the
//! finite-difference form of underdamped Langevin dynamics with friction
//! `gamma` and time step `dt`. The maps here connect the two pictures:
//!
//! ```text
//! rho = (1 - gamma*dt/2) / (1 + gamma*dt/2)
//! gamma = (2/dt) * (1 - rho) / (1 + rho)
//! lr  = dt^2 * (1 + rho) / 2
//! ```
//!
//! Cooling lowers the temperature by raising the friction, i.e. by lowering
//! `rho`. The geometric schedule `rho_n = max(0, 1 - (1 - rho0)/alpha^n)`
//! reaches zero exactly at step `S` when `alpha = (1 - rho0)^(1/S)`.

use crate::error::{Error, Result};
use crate::num::Real;

/// Momentum coefficient for a given friction coefficient, `dt` time step.
///
/// `gamma = 0` (no dissipation) gives `rho = 1`; `gamma = 2/dt` (overdamped
/// limit) gives `rho = 0`. Larger frictions would make `rho` negative and
/// are rejected.
pub fn rho_from_gamma<F: Real>(gamma: F, dt: F) -> Result<F> {
    check_dt(dt)?;
    if gamma < F::zero() {
        return Err(Error::invalid("gamma", format!("{gamma} is negative")));
    }
    let two = F::from(2.0).unwrap();
    if gamma * dt > two {
        return Err(Error::invalid(
            "gamma",
            format!("{gamma} exceeds 2/dt = {}", two / dt),
        ));
    }
    let half_gdt = gamma * dt / two;
    Ok((F::one() - half_gdt) / (F::one() + half_gdt))
}

/// Friction coefficient for a given momentum coefficient; exact inverse of
/// [`rho_from_gamma`].
pub fn gamma_from_rho<F: Real>(rho: F, dt: F) -> Result<F> {
    check_dt(dt)?;
    check_rho(rho)?;
    let two = F::from(2.0).unwrap();
    Ok(two / dt * (F::one() - rho) / (F::one() + rho))
}

/// Learning rate paired with a momentum coefficient: `lr = dt^2 (1 + rho)/2`.
///
/// At `rho = 1` this is `dt^2`; at `rho = 0` (plain SGD) it is `dt^2 / 2`.
pub fn lr_from_rho<F: Real>(rho: F, dt: F) -> Result<F> {
    check_dt(dt)?;
    check_rho(rho)?;
    let two = F::from(2.0).unwrap();
    Ok(dt * dt * (F::one() + rho) / two)
}

/// Cooling rate `alpha = (1 - rho0)^(1/S)` that drives the schedule from
/// `rho0` at step 0 to exactly 0 at step `S`.
///
/// The result is nudged down by at most a couple of ulps so that
/// `cooling_rho(S, rho0, alpha)` lands at (or just below, hence clamped to)
/// zero despite the rounding of `alpha^S`; without the nudge the endpoint
/// can overshoot zero by ~`S * eps` for large `S`.
pub fn cooling_rate<F: Real>(rho0: F, total_steps: usize) -> Result<F> {
    check_rho0(rho0)?;
    if total_steps == 0 {
        return Err(Error::invalid("total_steps", "must be positive"));
    }
    let one_minus = F::one() - rho0;
    let steps = F::from(total_steps).unwrap();
    let mut alpha = one_minus.powf(steps.recip());
    while alpha.powf(steps) > one_minus {
        alpha = decrement_ulp(alpha);
    }
    Ok(alpha)
}

/// Momentum coefficient at iteration `n` of the geometric cooling schedule:
/// `max(0, 1 - (1 - rho0)/alpha^n)`.
///
/// Nonincreasing in `n` for `alpha < 1`, constant (`= rho0`) for `alpha = 1`,
/// and clamped at zero once the raw value goes negative.
pub fn cooling_rho<F: Real>(n: usize, rho0: F, alpha: F) -> Result<F> {
    check_rho0(rho0)?;
    if !(alpha > F::zero() && alpha <= F::one()) {
        return Err(Error::invalid("alpha", format!("{alpha} not in (0, 1]")));
    }
    let decay = alpha.powf(F::from(n).unwrap());
    if decay == F::one() {
        // n = 0 or alpha = 1: the schedule value is rho0 itself; going
        // through 1 - (1 - rho0) would lose an ulp.
        return Ok(rho0);
    }
    let raw = F::one() - (F::one() - rho0) / decay;
    Ok(raw.max(F::zero()).min(rho0))
}

fn check_dt<F: Real>(dt: F) -> Result<()> {
    if dt > F::zero() && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("dt", format!("{dt} must be positive")))
    }
}

fn check_rho<F: Real>(rho: F) -> Result<()> {
    if rho >= F::zero() && rho <= F::one() {
        Ok(())
    } else {
        Err(Error::invalid("rho", format!("{rho} not in [0, 1]")))
    }
}

fn check_rho0<F: Real>(rho0: F) -> Result<()> {
    if rho0 >= F::zero() && rho0 < F::one() {
        Ok(())
    } else {
        Err(Error::invalid("rho0", format!("{rho0} not in [0, 1)")))
    }
}

/// Next float toward negative infinity (one ulp down for positive values).
fn decrement_ulp<F: Real>(x: F) -> F {
    let tiny = x * F::epsilon();
    let mut y = x - tiny;
    while y >= x {
        y = y - tiny - tiny;
    }
    y
}
