//! `harmonic`: command-line front end for harmonic-core.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 invalid input.

mod commands;
mod config;
mod demos;
mod outcome;
mod output;

use clap::{Parser, Subcommand};
use config::{parse_tolerance, RunConfig, TOLERANCES};
use outcome::{Failure, Verdict};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "harmonic", version, about = "Weighted harmonic analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for reports and tables.
    #[arg(long, global = true, default_value = "harmonic-out")]
    out: PathBuf,
    /// Override a named tolerance, e.g. `--tol resonance=1e-8`. Repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tolerance, value_name = "NAME=VALUE")]
    tol: Vec<(String, f64)>,
    /// Recorded in every output for reproducibility.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the weight axioms and estimate the growth order.
    WeightCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Smallest degree whose iterated differences vanish.
    Poly {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Mean of a signal, or its polynomial w-mean when a weight is given.
    Mean {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        weight: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        order: usize,
    },
    /// Split a signal into a weighted trigonometric polynomial and a residual.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        order: usize,
        #[arg(long, default_value_t = 0.25)]
        tail_start: f64,
    },
    /// Estimate the frequency atoms of a signal.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        weight: Option<PathBuf>,
    },
    /// Resonance set of an operator against a matrix.
    Resonance {
        #[arg(long)]
        input: PathBuf,
    },
    /// Forward solution of a matrix recurrence.
    Solve {
        #[arg(long)]
        input: PathBuf,
    },
    /// Decay of normalised powers and power differences.
    Kt {
        #[arg(long)]
        input: PathBuf,
    },
    /// Power growth against polynomial weights and nilpotency of `x − e`.
    GelfandHille {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a bundled scenario.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(demos::DEMOS))]
        name: String,
    },
    /// List the named tolerances and their defaults.
    Tolerances,
}

fn run(cli: Cli) -> Result<Verdict, Failure> {
    let cfg = |name: &str, inputs: Vec<PathBuf>| RunConfig::new(name, inputs, &cli.tol, cli.seed, cli.out.clone());
    match &cli.command {
        Command::WeightCheck { input } => commands::weight_check(&cfg("weight-check", vec![input.clone()])?),
        Command::Poly { input, h, n_max } => commands::poly(&cfg("poly", vec![input.clone()])?, *h, *n_max),
        Command::Mean { input, weight, order } => {
            let mut inputs = vec![input.clone()];
            inputs.extend(weight.clone());
            commands::mean(&cfg("mean", inputs)?, weight.as_deref(), *order)
        }
        Command::Decompose { input, order, tail_start } => {
            commands::decompose(&cfg("decompose", vec![input.clone()])?, *order, *tail_start)
        }
        Command::Spectrum { input, weight } => {
            let mut inputs = vec![input.clone()];
            inputs.extend(weight.clone());
            commands::spectrum(&cfg("spectrum", inputs)?, weight.as_deref())
        }
        Command::Resonance { input } => commands::resonance(&cfg("resonance", vec![input.clone()])?),
        Command::Solve { input } => commands::solve(&cfg("solve", vec![input.clone()])?),
        Command::Kt { input } => commands::kt(&cfg("kt", vec![input.clone()])?),
        Command::GelfandHille { input } => commands::gelfand_hille(&cfg("gelfand-hille", vec![input.clone()])?),
        Command::Demo { name } => demos::run(&cfg(&format!("demo {name}"), vec![])?, name),
        Command::Tolerances => {
            for (name, value, what) in TOLERANCES {
                println!("{name:<10} {value:<8e} {what}");
            }
            Ok(Verdict::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(v) => v.exit_code(),
        Err(f) => {
            eprintln!("harmonic: {f}");
            f.exit_code()
        }
    }
}
