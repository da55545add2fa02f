//! `coolbench`: seeded optimizer comparisons on the objective suite, with
//! machine-readable CSV logs and temperature diagnostics.

mod config;
mod csvio;
mod objective;
mod runner;
mod summary;

use clap::{Parser, Subcommand};
use config::ExperimentConfig;
use coolmomentum::optim::{cooling_rate, cooling_rho, lr_from_rho};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit code for configuration errors (bad file, unknown names, invalid
/// parameters); runtime failures (diverged seeds, I/O) exit with 1.
const CONFIG_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "coolbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config; one independent run per seed.
    Run {
        /// TOML experiment config.
        config: PathBuf,
        /// Replace the config's seed list (comma-separated).
        #[arg(long)]
        seed_override: Option<String>,
        /// Replace the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate the summaries in an experiment directory (or in each
    /// immediate subdirectory that holds one).
    Summarize { dir: PathBuf },
    /// Print the cooling schedule for rho0 over the given number of steps
    /// as CSV (n,rho,lr).
    Schedule {
        rho0: f64,
        steps: usize,
        /// Time step used for the lr column.
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            seed_override,
            out,
        } => {
            let mut config = match ExperimentConfig::from_path(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("configuration error: {e:#}");
                    return Ok(ExitCode::from(CONFIG_ERROR));
                }
            };
            if let Some(seeds) = seed_override {
                match parse_seeds(&seeds) {
                    Ok(seeds) => config.run.seeds = seeds,
                    Err(e) => {
                        eprintln!("configuration error: {e:#}");
                        return Ok(ExitCode::from(CONFIG_ERROR));
                    }
                }
            }
            if let Some(out) = out {
                config.run.out_dir = out;
            }
            if let Err(e) = config.validate() {
                eprintln!("configuration error: {e:#}");
                return Ok(ExitCode::from(CONFIG_ERROR));
            }
            let out_dir = config.run.out_dir.clone();
            let outcomes = runner::execute(&config, &out_dir)?;
            let failed = outcomes.iter().filter(|o| o.result.is_err()).count();
            for o in &outcomes {
                match &o.result {
                    Ok(_) => println!("seed {}: ok", o.seed),
                    Err(e) => println!("seed {}: FAILED ({e})", o.seed),
                }
            }
            println!(
                "{} of {} runs succeeded; outputs in {}",
                outcomes.len() - failed,
                outcomes.len(),
                out_dir.display()
            );
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Summarize { dir } => {
            let table = match summary::summarize(&dir) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("configuration error: {e:#}");
                    return Ok(ExitCode::from(CONFIG_ERROR));
                }
            };
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Schedule { rho0, steps, dt } => {
            let alpha = match cooling_rate(rho0, steps) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("configuration error: {e:#}");
                    return Ok(ExitCode::from(CONFIG_ERROR));
                }
            };
            println!("# alpha = {alpha:.16e}");
            println!("n,rho,lr");
            for n in 0..=steps {
                let rho = cooling_rho(n, rho0, alpha)?;
                let lr = lr_from_rho(rho, dt)?;
                println!("{n},{},{}", csvio::fmt_float(rho), csvio::fmt_float(lr));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_seeds(text: &str) -> anyhow::Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| anyhow::anyhow!("bad seed {s:?} in --seed-override"))
        })
        .collect()
}
