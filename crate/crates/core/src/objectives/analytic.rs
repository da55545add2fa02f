//! Analytic test potentials with closed-form gradients.

use super::Objective;
use crate::error::{Error, Result};
use crate::num::Real;

/// Separable harmonic potential `U(x) = sum_i k_i x_i^2 / 2`.
#[derive(Debug, Clone)]
pub struct Quadratic<F> {
    stiffness: Vec<F>,
}

impl<F: Real> Quadratic<F> {
    pub fn new(stiffness: Vec<F>) -> Result<Self> {
        if stiffness.is_empty() {
            return Err(Error::invalid("stiffness", "must not be empty"));
        }
        if let Some(k) = stiffness.iter().find(|k| !(**k > F::zero())) {
            return Err(Error::invalid("stiffness", format!("component {k} not positive")));
        }
        Ok(Quadratic { stiffness })
    }

    /// Convenience 1-D oscillator with unit stiffness.
    pub fn unit() -> Self {
        Quadratic {
            stiffness: vec![F::one()],
        }
    }

    pub fn stiffness(&self) -> &[F] {
        &self.stiffness
    }
}

impl<F: Real> Objective<F> for Quadratic<F> {
    fn dimension(&self) -> usize {
        self.stiffness.len()
    }

    fn value(&self, x: &[F]) -> F {
        let half = F::from(0.5).unwrap();
        x.iter()
            .zip(&self.stiffness)
            .fold(F::zero(), |acc, (&xi, &ki)| acc + half * ki * xi * xi)
    }

    fn gradient(&self, x: &[F]) -> Vec<F> {
        x.iter().zip(&self.stiffness).map(|(&xi, &ki)| ki * xi).collect()
    }
}

/// Tilted one-dimensional double well `U(x) = (x^2 - 1)^2 + 0.3 x`.
///
/// The tilt makes the left well the global minimum while keeping the barrier
/// between the wells crossable at moderate temperature.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleWell;

impl DoubleWell {
    pub const TILT: f64 = 0.3;

    /// Stationary points located by grid search plus bisection on `U'`.
    ///
    /// `resolution` is the grid spacing over `[-2, 2]`; 1e-4 is plenty for
    /// basin classification.
    pub fn landmarks<F: Real>(resolution: F) -> DoubleWellLandmarks<F> {
        let well = DoubleWell;
        let lo = F::from(-2.0).unwrap();
        let hi = F::from(2.0).unwrap();
        let n = ((hi - lo) / resolution).to_usize().unwrap_or(40_000).max(8);
        // Bracket sign changes of U' on the grid, then bisect each bracket.
        let dwell = |x: F| well.gradient(&[x])[0];
        let mut roots = Vec::new();
        let mut prev_x = lo;
        let mut prev_d = dwell(lo);
        for i in 1..=n {
            let x = lo + (hi - lo) * F::from(i).unwrap() / F::from(n).unwrap();
            let d = dwell(x);
            if prev_d == F::zero() {
                roots.push(prev_x);
            } else if (prev_d < F::zero()) != (d < F::zero()) {
                roots.push(bisect(dwell, prev_x, x));
            }
            prev_x = x;
            prev_d = d;
        }
        assert_eq!(roots.len(), 3, "double well must have three stationary points");
        DoubleWellLandmarks {
            global_min: roots[0],
            barrier: roots[1],
            local_min: roots[2],
            barrier_height: well.value(&[roots[1]]) - well.value(&[roots[0]]),
        }
    }
}

fn bisect<F: Real>(f: impl Fn(F) -> F, mut a: F, mut b: F) -> F {
    let two = F::from(2.0).unwrap();
    let mut fa = f(a);
    for _ in 0..200 {
        let m = (a + b) / two;
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if (fa < F::zero()) == (fm < F::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    (a + b) / two
}

/// Stationary points of the tilted double well, ordered left to right.
#[derive(Debug, Clone, Copy)]
pub struct DoubleWellLandmarks<F> {
    /// Global minimizer (negative x).
    pub global_min: F,
    /// Local maximum separating the wells; the basin boundary.
    pub barrier: F,
    /// Local (higher) minimizer at positive x.
    pub local_min: F,
    /// `U(barrier) - U(global_min)`.
    pub barrier_height: F,
}

impl<F: Real> DoubleWellLandmarks<F> {
    /// True if `x` lies in the basin of the global minimum.
    pub fn in_global_basin(&self, x: F) -> bool {
        x < self.barrier
    }
}

impl<F: Real> Objective<F> for DoubleWell {
    fn dimension(&self) -> usize {
        1
    }

    fn value(&self, x: &[F]) -> F {
        let t = x[0] * x[0] - F::one();
        t * t + F::from(Self::TILT).unwrap() * x[0]
    }

    fn gradient(&self, x: &[F]) -> Vec<F> {
        let four = F::from(4.0).unwrap();
        vec![four * x[0] * (x[0] * x[0] - F::one()) + F::from(Self::TILT).unwrap()]
    }
}

/// Rosenbrock valley, global minimum `U = 0` at the all-ones point.
#[derive(Debug, Clone, Copy)]
pub struct Rosenbrock {
    dim: usize,
}

impl Rosenbrock {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("dim", format!("{dim} < 2")));
        }
        Ok(Rosenbrock { dim })
    }
}

impl<F: Real> Objective<F> for Rosenbrock {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[F]) -> F {
        let hundred = F::from(100.0).unwrap();
        let mut sum = F::zero();
        for i in 0..self.dim - 1 {
            let a = x[i + 1] - x[i] * x[i];
            let b = F::one() - x[i];
            sum += hundred * a * a + b * b;
        }
        sum
    }

    fn gradient(&self, x: &[F]) -> Vec<F> {
        let hundred = F::from(100.0).unwrap();
        let two = F::from(2.0).unwrap();
        let four = F::from(4.0).unwrap();
        let mut g = vec![F::zero(); self.dim];
        for i in 0..self.dim - 1 {
            let a = x[i + 1] - x[i] * x[i];
            g[i] += -four * hundred * x[i] * a - two * (F::one() - x[i]);
            g[i + 1] += two * hundred * a;
        }
        g
    }
}

/// Rastrigin function, global minimum `U = 0` at the origin.
#[derive(Debug, Clone, Copy)]
pub struct Rastrigin {
    dim: usize,
}

impl Rastrigin {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        Ok(Rastrigin { dim })
    }
}

impl<F: Real> Objective<F> for Rastrigin {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[F]) -> F {
        let a = F::from(10.0).unwrap();
        let two_pi = F::from(2.0 * std::f64::consts::PI).unwrap();
        x.iter().fold(a * F::from(self.dim).unwrap(), |acc, &xi| {
            acc + xi * xi - a * (two_pi * xi).cos()
        })
    }

    fn gradient(&self, x: &[F]) -> Vec<F> {
        let a = F::from(10.0).unwrap();
        let two = F::from(2.0).unwrap();
        let two_pi = F::from(2.0 * std::f64::consts::PI).unwrap();
        x.iter()
            .map(|&xi| two * xi + a * two_pi * (two_pi * xi).sin())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradcheck::check_gradient;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_hand_values() {
        let q = Quadratic::new(vec![1.0]).unwrap();
        assert_relative_eq!(q.value(&[2.0]), 2.0);
        assert_eq!(q.gradient(&[2.0]), vec![2.0]);
        assert_eq!(q.value(&[0.0]), 0.0);
        assert_eq!(q.gradient(&[0.0]), vec![0.0]);

        let q2 = Quadratic::new(vec![1.0, 4.0]).unwrap();
        assert_relative_eq!(q2.value(&[1.0, 1.0]), 2.5);
        assert_eq!(q2.gradient(&[1.0, 1.0]), vec![1.0, 4.0]);
    }

    #[test]
    fn quadratic_rejects_nonpositive_stiffness() {
        assert!(Quadratic::new(vec![1.0, 0.0]).is_err());
        assert!(Quadratic::new(vec![-2.0]).is_err());
        assert!(Quadratic::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn force_is_negative_gradient() {
        let q = Quadratic::new(vec![2.0, 3.0]).unwrap();
        let x = [0.7, -1.1];
        let g = q.gradient(&x);
        let f = q.force(&x);
        for i in 0..2 {
            assert_eq!(f[i], -g[i]);
        }
    }

    #[test]
    fn double_well_value_at_origin() {
        assert_relative_eq!(DoubleWell.value(&[0.0]), 1.0);
    }

    #[test]
    fn double_well_landmarks_from_grid_oracle() {
        let lm = DoubleWell::landmarks::<f64>(1e-4);
        // left well is strictly deeper
        assert!(lm.global_min < 0.0 && lm.local_min > 0.0);
        assert!(DoubleWell.value(&[lm.global_min]) < DoubleWell.value(&[lm.local_min]));
        assert!(lm.barrier_height > 0.0);
        // stationarity, and the advertised approximate locations
        for x in [lm.global_min, lm.barrier, lm.local_min] {
            assert!(DoubleWell.gradient(&[x])[0].abs() < 1e-9, "U'({x}) != 0");
        }
        assert_relative_eq!(lm.global_min, -1.036, max_relative = 1e-3);
        assert_relative_eq!(lm.local_min, 0.96, max_relative = 1e-2);
        // basin classification used by run summaries
        assert!(lm.in_global_basin(-1.0));
        assert!(!lm.in_global_basin(1.0));
    }

    #[test]
    fn rosenbrock_known_points() {
        let r = Rosenbrock::new(2).unwrap();
        assert_eq!(r.value(&[1.0, 1.0]), 0.0);
        assert_eq!(r.gradient(&[1.0, 1.0]), vec![0.0, 0.0]);
        assert_relative_eq!(r.value(&[0.0, 0.0]), 1.0);
        let r5 = Rosenbrock::new(5).unwrap();
        assert_eq!(r5.value(&[1.0; 5]), 0.0);
        assert!(Rosenbrock::new(1).is_err());
    }

    #[test]
    fn rastrigin_known_points() {
        let r = Rastrigin::new(3).unwrap();
        assert_relative_eq!(r.value(&[0.0, 0.0, 0.0]), 0.0, epsilon = 1e-12);
        for g in r.gradient(&[0.0, 0.0, 0.0]) {
            assert_relative_eq!(g, 0.0, epsilon = 1e-12);
        }
        assert!(Rastrigin::new(0).is_err());
    }

    #[test]
    fn gradients_match_finite_differences() {
        let q = Quadratic::new(vec![1.0, 4.0, 0.5]).unwrap();
        check_gradient(&q, 100, 77, 1e-6).unwrap();
        check_gradient(&DoubleWell, 100, 78, 1e-6).unwrap();
        check_gradient(&Rosenbrock::new(4).unwrap(), 100, 79, 1e-6).unwrap();
        check_gradient(&Rastrigin::new(3).unwrap(), 100, 80, 1e-6).unwrap();
    }
}
