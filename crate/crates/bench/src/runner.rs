//! Executing an experiment: one independent run per seed, CSV outputs, a
//! summary and a failure manifest.

use crate::config::{ExperimentConfig, Granularity};
use crate::csvio::{fmt_float, EPOCH_HEADER, PARAMS_HEADER, STEP_HEADER, SUMMARY_HEADER};
use crate::objective::{build, BuiltObjective};
use anyhow::{bail, Context};
use coolmomentum::objectives::StochasticObjective;
use coolmomentum::optim::{
    adam_run, cooling_rate, coolmomentum_run, sgd_run, AdamConfig, CoolMomentumConfig,
};
use coolmomentum::runlog::RunLog;
use coolmomentum::thermometry::epoch_temperature_series;
use std::fs;
use std::io::Write;
use std::path::Path;

/// What one seed contributed to the summary.
pub struct SeedOutcome {
    pub seed: u64,
    pub result: Result<SeedStats, String>,
}

#[derive(Debug)]
pub struct SeedStats {
    pub final_loss: f64,
    pub pr_loss: f64,
    pub temperature: f64,
    pub rescaled_temperature: f64,
    pub in_global_basin: Option<bool>,
    pub averaged_in_global_basin: Option<bool>,
}

/// Per-epoch aggregates written to the epochs CSV.
struct EpochRecord {
    epoch: usize,
    mean_loss: f64,
    final_loss: f64,
    pr_loss: f64,
    temperature: f64,
    rescaled: f64,
}

/// Run every seed of the experiment, writing per-run CSVs plus `summary.csv`
/// (and `failures.txt` when some seed aborted) into `out_dir`. One failing
/// seed never stops the batch. Returns the per-seed outcomes in config
/// order.
pub fn execute(config: &ExperimentConfig, out_dir: &Path) -> anyhow::Result<Vec<SeedOutcome>> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    fs::write(out_dir.join("config.toml"), config.to_toml()).context("writing config copy")?;

    let mut outcomes = Vec::with_capacity(config.run.seeds.len());
    for &seed in &config.run.seeds {
        let outcome = run_seed(config, seed, out_dir)
            .map_err(|e| format!("{e:#}"));
        outcomes.push(SeedOutcome {
            seed,
            result: outcome,
        });
    }

    write_summary(config, &outcomes, out_dir)?;
    let failures: Vec<&SeedOutcome> = outcomes.iter().filter(|o| o.result.is_err()).collect();
    if !failures.is_empty() {
        let mut manifest = String::new();
        for f in &failures {
            manifest.push_str(&format!(
                "seed={} error={}\n",
                f.seed,
                f.result.as_ref().unwrap_err()
            ));
        }
        fs::write(out_dir.join("failures.txt"), manifest).context("writing failure manifest")?;
    }
    Ok(outcomes)
}

fn run_seed(config: &ExperimentConfig, seed: u64, out_dir: &Path) -> anyhow::Result<SeedStats> {
    let BuiltObjective {
        mut stochastic,
        x0,
        basin,
    } = build(&config.objective, seed)?;

    let log = drive(config, stochastic.as_mut(), &x0, seed)?;
    let epochs = epoch_records(&log, config.run.steps_per_epoch, stochastic.as_ref())?;

    if config.run.granularity == Granularity::PerStep {
        write_steps_csv(&log, &out_dir.join(format!("seed_{seed}_steps.csv")))?;
    }
    write_epochs_csv(&epochs, &out_dir.join(format!("seed_{seed}_epochs.csv")))?;

    // averaged parameters: Polyak-Ruppert mean over the last epoch
    let averaged = last_epoch_mean(&log, config.run.steps_per_epoch);
    write_params_csv(
        &log.final_x,
        &averaged,
        &out_dir.join(format!("seed_{seed}_params.csv")),
    )?;

    let last = epochs.last().expect("at least one epoch");
    Ok(SeedStats {
        final_loss: stochastic.exact_value(&log.final_x),
        pr_loss: stochastic.exact_value(&averaged),
        temperature: last.temperature,
        rescaled_temperature: last.rescaled,
        in_global_basin: basin.as_ref().map(|b| b(&log.final_x)),
        averaged_in_global_basin: basin.as_ref().map(|b| b(&averaged)),
    })
}

/// Dispatch to the configured optimizer's driver.
fn drive(
    config: &ExperimentConfig,
    objective: &mut dyn StochasticObjective<f64>,
    x0: &[f64],
    seed: u64,
) -> anyhow::Result<RunLog<f64>> {
    let opt = &config.optimizer;
    let steps = config.run.steps;
    let log = match opt.name.as_str() {
        "coolmomentum" => {
            let dt = opt.dt.unwrap_or(0.1);
            let rho0 = opt.rho0.unwrap_or(0.99);
            let alpha = match opt.alpha {
                Some(a) => a,
                None => cooling_rate(rho0, steps)?,
            };
            let cm = CoolMomentumConfig::new(dt, rho0, alpha, steps)?;
            coolmomentum_run(objective, x0, &cm, seed)?
        }
        "momentum" => {
            let dt = opt.dt.unwrap_or(0.1);
            let rho = opt.rho.unwrap_or(0.9);
            let cm = CoolMomentumConfig::new(dt, rho, 1.0, steps)?;
            coolmomentum_run(objective, x0, &cm, seed)?
        }
        "sgd" => {
            let lr = opt
                .lr
                .ok_or_else(|| anyhow::anyhow!("sgd requires optimizer.lr"))?;
            sgd_run(objective, x0, lr, steps, seed)?
        }
        "adam" => {
            let adam = AdamConfig::new(
                opt.lr.unwrap_or(1e-3),
                opt.beta1.unwrap_or(0.9),
                opt.beta2.unwrap_or(0.999),
                opt.epsilon.unwrap_or(1e-8),
            )?;
            adam_run(objective, x0, &adam, steps, seed)?
        }
        other => bail!("unknown optimizer {other:?}"),
    };
    Ok(log)
}

fn epoch_records(
    log: &RunLog<f64>,
    steps_per_epoch: usize,
    objective: &dyn StochasticObjective<f64>,
) -> anyhow::Result<Vec<EpochRecord>> {
    let temperatures = epoch_temperature_series(log, steps_per_epoch)?;
    let mut records = Vec::with_capacity(temperatures.epochs.len());
    let mut x = log.x0.clone();
    let mut epoch_sum = vec![0.0; x.len()];
    let mut loss_sum = 0.0;
    for (n, (step, update)) in log.steps.iter().zip(&log.updates).enumerate() {
        for (xi, di) in x.iter_mut().zip(update) {
            *xi += di;
        }
        for (s, xi) in epoch_sum.iter_mut().zip(&x) {
            *s += xi;
        }
        loss_sum += step.loss;
        if (n + 1) % steps_per_epoch == 0 {
            let epoch = n / steps_per_epoch;
            let pr_x: Vec<f64> = epoch_sum.iter().map(|s| s / steps_per_epoch as f64).collect();
            let report = temperatures.epochs[epoch];
            records.push(EpochRecord {
                epoch,
                mean_loss: loss_sum / steps_per_epoch as f64,
                final_loss: objective.exact_value(&x),
                pr_loss: objective.exact_value(&pr_x),
                temperature: report.temperature,
                rescaled: report.rescaled,
            });
            epoch_sum.iter_mut().for_each(|s| *s = 0.0);
            loss_sum = 0.0;
        }
    }
    Ok(records)
}

fn last_epoch_mean(log: &RunLog<f64>, steps_per_epoch: usize) -> Vec<f64> {
    let skip = log.len() - steps_per_epoch;
    let mut x = log.x0.clone();
    let mut sum = vec![0.0; x.len()];
    for (n, update) in log.updates.iter().enumerate() {
        for (xi, di) in x.iter_mut().zip(update) {
            *xi += di;
        }
        if n >= skip {
            for (s, xi) in sum.iter_mut().zip(&x) {
                *s += xi;
            }
        }
    }
    sum.iter().map(|s| s / steps_per_epoch as f64).collect()
}

fn write_steps_csv(log: &RunLog<f64>, path: &Path) -> anyhow::Result<()> {
    let mut out = String::with_capacity(64 * (log.len() + 1));
    out.push_str(STEP_HEADER);
    out.push('\n');
    for s in &log.steps {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.step,
            fmt_float(s.rho),
            fmt_float(s.lr),
            fmt_float(s.loss),
            fmt_float(s.dx_sq_norm)
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn write_epochs_csv(records: &[EpochRecord], path: &Path) -> anyhow::Result<()> {
    let mut out = String::new();
    out.push_str(EPOCH_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.epoch,
            fmt_float(r.mean_loss),
            fmt_float(r.final_loss),
            fmt_float(r.pr_loss),
            fmt_float(r.temperature),
            fmt_float(r.rescaled)
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn write_params_csv(final_x: &[f64], averaged: &[f64], path: &Path) -> anyhow::Result<()> {
    let mut out = String::new();
    out.push_str(PARAMS_HEADER);
    out.push('\n');
    for (i, (f, a)) in final_x.iter().zip(averaged).enumerate() {
        out.push_str(&format!("{i},{},{}\n", fmt_float(*f), fmt_float(*a)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

fn write_summary(
    config: &ExperimentConfig,
    outcomes: &[SeedOutcome],
    out_dir: &Path,
) -> anyhow::Result<()> {
    let path = out_dir.join("summary.csv");
    let mut file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
    writeln!(file, "{SUMMARY_HEADER}")?;
    let _ = config;
    for o in outcomes {
        match &o.result {
            Ok(s) => writeln!(
                file,
                "{},ok,{},{},{},{},{},{}",
                o.seed,
                fmt_float(s.final_loss),
                fmt_float(s.pr_loss),
                fmt_float(s.temperature),
                fmt_float(s.rescaled_temperature),
                opt_bool(s.in_global_basin),
                opt_bool(s.averaged_in_global_basin),
            )?,
            Err(_) => writeln!(file, "{},failed,,,,,,", o.seed)?,
        }
    }
    Ok(())
}

fn opt_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}
