//! Temperature measurement from optimizer trajectories.
//!
//! Reading each update as a velocity `v = dx/dt`, the kinetic temperature of
//! a window of updates is the mean squared velocity per degree of freedom:
//!
//! ```text
//! T = (1 / (Size * S)) * sum_i sum_n (dx_{i,n} / dt)^2
//! ```
//!
//! The rescaled form `T * dt^2` needs no time step — it is the mean squared
//! update per parameter — so it stays comparable across optimizers that have
//! no dt reading (Adam). Annealing shows up as a per-epoch series of these
//! values that keeps decreasing instead of dropping once and flattening.

use crate::error::{Error, Result};
use crate::num::Real;
use crate::runlog::RunLog;

/// Temperature of one window of updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureReport<F> {
    /// First step of the window (inclusive).
    pub window_start: usize,
    /// Last step of the window (exclusive).
    pub window_end: usize,
    /// Degrees of freedom (number of parameters).
    pub size: usize,
    /// Kinetic temperature of the window.
    pub temperature: F,
    /// `temperature * dt^2`.
    pub rescaled: F,
}

/// Kinetic temperature of a window of update vectors.
pub fn measure_temperature<F: Real>(updates: &[Vec<F>], dt: F) -> Result<TemperatureReport<F>> {
    if updates.is_empty() {
        return Err(Error::BadWindow("empty update window".into()));
    }
    let size = updates[0].len();
    if size == 0 {
        return Err(Error::BadWindow("zero-dimensional updates".into()));
    }
    let mut sum_sq = F::zero();
    for (i, dx) in updates.iter().enumerate() {
        if dx.len() != size {
            return Err(Error::shape("measure_temperature updates", size, dx.len()));
        }
        let _ = i;
        sum_sq += crate::num::l2_norm_sq(dx);
    }
    Ok(report_from_sum(sum_sq, 0, updates.len(), size, dt))
}

/// Same computation from precomputed per-step `|dx|^2` values, as logged in
/// a [`RunLog`].
pub fn temperature_from_sq_norms<F: Real>(
    dx_sq_norms: &[F],
    size: usize,
    dt: F,
    window_start: usize,
) -> Result<TemperatureReport<F>> {
    if dx_sq_norms.is_empty() {
        return Err(Error::BadWindow("empty update window".into()));
    }
    if size == 0 {
        return Err(Error::BadWindow("zero-dimensional updates".into()));
    }
    let sum_sq = dx_sq_norms.iter().fold(F::zero(), |a, &b| a + b);
    Ok(report_from_sum(
        sum_sq,
        window_start,
        window_start + dx_sq_norms.len(),
        size,
        dt,
    ))
}

fn report_from_sum<F: Real>(
    sum_sq: F,
    start: usize,
    end: usize,
    size: usize,
    dt: F,
) -> TemperatureReport<F> {
    let steps = F::from(end - start).unwrap();
    let rescaled = sum_sq / (F::from(size).unwrap() * steps);
    TemperatureReport {
        window_start: start,
        window_end: end,
        size,
        temperature: rescaled / (dt * dt),
        rescaled,
    }
}

/// Kinetic energy `sum_i m v_i^2 / 2`.
pub fn kinetic_energy<F: Real>(v: &[F], mass: F) -> F {
    crate::num::l2_norm_sq(v) * mass / F::from(2.0).unwrap()
}

/// Arithmetic mean of the trajectory slice `trajectory[window]`.
pub fn polyak_ruppert_average<F: Real>(
    trajectory: &[Vec<F>],
    window: std::ops::Range<usize>,
) -> Result<Vec<F>> {
    if window.is_empty() || window.end > trajectory.len() {
        return Err(Error::BadWindow(format!(
            "{window:?} out of bounds for trajectory of length {}",
            trajectory.len()
        )));
    }
    let dim = trajectory[window.start].len();
    let mut mean = vec![F::zero(); dim];
    for x in &trajectory[window.clone()] {
        if x.len() != dim {
            return Err(Error::shape("polyak_ruppert_average", dim, x.len()));
        }
        for (m, xi) in mean.iter_mut().zip(x) {
            *m += *xi;
        }
    }
    let count = F::from(window.len()).unwrap();
    for m in &mut mean {
        *m /= count;
    }
    Ok(mean)
}

/// Per-epoch temperatures of a run, one report per full epoch window.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochTemperatures<F> {
    pub epochs: Vec<TemperatureReport<F>>,
    /// Trailing window shorter than `steps_per_epoch`, when the run length
    /// does not divide evenly; reported separately so full epochs stay
    /// comparable.
    pub partial_tail: Option<TemperatureReport<F>>,
}

/// Split a run into epochs of `steps_per_epoch` iterations and measure each.
pub fn epoch_temperature_series<F: Real>(
    run: &RunLog<F>,
    steps_per_epoch: usize,
) -> Result<EpochTemperatures<F>> {
    if steps_per_epoch == 0 || steps_per_epoch > run.len() {
        return Err(Error::BadWindow(format!(
            "steps_per_epoch {steps_per_epoch} invalid for run of length {}",
            run.len()
        )));
    }
    let sq_norms: Vec<F> = run.steps.iter().map(|s| s.dx_sq_norm).collect();
    let size = run.dimension();
    let mut epochs = Vec::new();
    let mut partial_tail = None;
    let mut start = 0;
    while start < sq_norms.len() {
        let end = (start + steps_per_epoch).min(sq_norms.len());
        let report = temperature_from_sq_norms(&sq_norms[start..end], size, run.dt, start)?;
        if end - start == steps_per_epoch {
            epochs.push(report);
        } else {
            partial_tail = Some(report);
        }
        start = end;
    }
    Ok(EpochTemperatures {
        epochs,
        partial_tail,
    })
}

/// Median of the per-step rescaled temperatures (`|dx|^2 / Size`) within
/// each full epoch; the robust per-epoch statistic used for cooling-trend
/// checks.
pub fn epoch_median_rescaled<F: Real>(run: &RunLog<F>, steps_per_epoch: usize) -> Result<Vec<F>> {
    if steps_per_epoch == 0 || steps_per_epoch > run.len() {
        return Err(Error::BadWindow(format!(
            "steps_per_epoch {steps_per_epoch} invalid for run of length {}",
            run.len()
        )));
    }
    let size = F::from(run.dimension()).unwrap();
    let medians = run
        .steps
        .chunks(steps_per_epoch)
        .filter(|c| c.len() == steps_per_epoch)
        .map(|chunk| {
            let mut vals: Vec<F> = chunk.iter().map(|s| s.dx_sq_norm / size).collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mid = vals.len() / 2;
            if vals.len() % 2 == 1 {
                vals[mid]
            } else {
                (vals[mid - 1] + vals[mid]) / F::from(2.0).unwrap()
            }
        })
        .collect();
    Ok(medians)
}

/// Mann–Kendall trend statistic of a series.
///
/// `s` counts concordant minus discordant pairs; `z` is the tie-corrected
/// normal approximation. `|z| <= 1.96` means no monotone trend at the
/// two-sided 5% level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannKendall<F> {
    pub s: i64,
    pub z: F,
}

impl<F: Real> MannKendall<F> {
    /// No monotone trend at the two-sided 5% level.
    pub fn no_trend_at_5pct(&self) -> bool {
        self.z.abs() <= F::from(1.959_963_985).unwrap()
    }
}

/// Compute the Mann–Kendall statistic; needs at least three points.
pub fn mann_kendall<F: Real>(series: &[F]) -> Result<MannKendall<F>> {
    let n = series.len();
    if n < 3 {
        return Err(Error::BadWindow(format!("need at least 3 points, got {n}")));
    }
    let mut s: i64 = 0;
    for i in 0..n {
        for j in i + 1..n {
            s += match series[j].partial_cmp(&series[i]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    // variance with tie correction: group the equal values
    let mut sorted: Vec<F> = series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut tie_term = 0_i64;
    let mut run = 1_i64;
    for i in 1..n {
        if sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            tie_term += run * (run - 1) * (2 * run + 5);
            run = 1;
        }
    }
    tie_term += run * (run - 1) * (2 * run + 5);
    let n_i = n as i64;
    let var = F::from(n_i * (n_i - 1) * (2 * n_i + 5) - tie_term).unwrap() / F::from(18.0).unwrap();
    let z = if s > 0 {
        F::from(s - 1).unwrap() / var.sqrt()
    } else if s < 0 {
        F::from(s + 1).unwrap() / var.sqrt()
    } else {
        F::zero()
    };
    Ok(MannKendall { s, z })
}
