//! Central-finite-difference gradient verification.
//!
//! Uses only `Objective::value`, so it is independent of any analytic or
//! backpropagated gradient it is asked to verify.

use crate::error::{Error, Result};
use crate::num::Real;
use crate::objectives::Objective;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Central difference `(U(x + h e_i) - U(x - h e_i)) / 2h` for every
/// coordinate, step `h = 1e-5`.
pub fn central_difference_gradient<F: Real, O: Objective<F> + ?Sized>(
    objective: &O,
    x: &[F],
) -> Vec<F> {
    let h = F::from(1e-5).unwrap();
    let two_h = h + h;
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let xi = probe[i];
            probe[i] = xi + h;
            let up = objective.value(&probe);
            probe[i] = xi - h;
            let down = objective.value(&probe);
            probe[i] = xi;
            (up - down) / two_h
        })
        .collect()
}

/// Compare the analytic gradient against central differences at `points`
/// random points drawn uniformly from `[-2, 2]^dim`.
///
/// The per-component error is measured relative to
/// `max(|analytic|, |numeric|, 1)`; the unit floor keeps near-zero
/// components from inflating the ratio. Returns the worst error seen, or an
/// error naming the first offending point.
pub fn check_gradient<F: Real, O: Objective<F> + ?Sized>(
    objective: &O,
    points: usize,
    seed: u64,
    tolerance: F,
) -> Result<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = objective.dimension();
    let mut worst = F::zero();
    for p in 0..points {
        let x: Vec<F> = (0..dim)
            .map(|_| F::from(rng.random_range(-2.0..2.0)).unwrap())
            .collect();
        let analytic = objective.gradient(&x);
        let numeric = central_difference_gradient(objective, &x);
        for i in 0..dim {
            let err = relative_error(analytic[i], numeric[i]);
            if err > worst {
                worst = err;
            }
            if err > tolerance {
                return Err(Error::invalid(
                    "gradient",
                    format!(
                        "point {p}, coordinate {i}: analytic {} vs numeric {} (relative error {err})",
                        analytic[i], numeric[i]
                    ),
                ));
            }
        }
    }
    Ok(worst)
}

/// Spot-check a gradient vector against central differences at the given
/// coordinate indices only; for objectives too expensive to difference in
/// full (the MLP).
pub fn check_gradient_at_indices<F: Real, O: Objective<F> + ?Sized>(
    objective: &O,
    x: &[F],
    indices: &[usize],
    tolerance: F,
) -> Result<F> {
    let h = F::from(1e-5).unwrap();
    let two_h = h + h;
    let analytic = objective.gradient(x);
    let mut probe = x.to_vec();
    let mut worst = F::zero();
    for &i in indices {
        let xi = probe[i];
        probe[i] = xi + h;
        let up = objective.value(&probe);
        probe[i] = xi - h;
        let down = objective.value(&probe);
        probe[i] = xi;
        let numeric = (up - down) / two_h;
        let err = relative_error(analytic[i], numeric);
        if err > worst {
            worst = err;
        }
        if err > tolerance {
            return Err(Error::invalid(
                "gradient",
                format!(
                    "coordinate {i}: analytic {} vs numeric {numeric} (relative error {err})",
                    analytic[i]
                ),
            ));
        }
    }
    Ok(worst)
}

fn relative_error<F: Real>(a: F, b: F) -> F {
    (a - b).abs() / a.abs().max(b.abs()).max(F::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Quadratic;

    #[test]
    fn accepts_correct_gradient() {
        let q = Quadratic::new(vec![2.0, 0.5]).unwrap();
        let worst = check_gradient(&q, 50, 1, 1e-6).unwrap();
        assert!(worst < 1e-8, "quadratic differencing should be ~1e-10, got {worst}");
    }

    #[test]
    fn rejects_wrong_gradient() {
        struct Broken;
        impl Objective<f64> for Broken {
            fn dimension(&self) -> usize {
                1
            }
            fn value(&self, x: &[f64]) -> f64 {
                x[0] * x[0]
            }
            fn gradient(&self, x: &[f64]) -> Vec<f64> {
                vec![x[0]] // missing factor of two
            }
        }
        assert!(check_gradient(&Broken, 10, 2, 1e-6).is_err());
    }

    #[test]
    fn index_spot_check() {
        let q = Quadratic::new(vec![1.0, 2.0, 3.0]).unwrap();
        let x = [0.3, -0.7, 1.1];
        check_gradient_at_indices(&q, &x, &[0, 2], 1e-6).unwrap();
    }
}
