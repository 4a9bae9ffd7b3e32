// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end to the spinbath harness.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinbath::bathgen::{BathParams, BathSpec, PhysicalConstants};
use spinbath::controller::ProtocolConfig;
use spinbath::harness::{
    generate_bath_file, ramsey_signal_file, run_ensemble, sweep_field, EnsembleReport, Job, Scenario, SignalState,
    WORKERS_ENV,
};
use spinbath::qsim::{linear_grid, HamiltonianOptions, DEFAULT_MAX_SPINS};

/// Nuclear spin bath narrowing by adaptive Ramsey measurements.
///
/// Exit status: 0 success, 1 error, 2 usage error, 3 some ensemble runs
/// failed (aggregates cover the rest), 4 every run failed.
#[derive(Parser)]
#[command(name = "spinbath", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random 13C bath and write it as JSON.
    GenerateBath(GenerateArgs),
    /// Run a scenario's ensemble at its first field value.
    Run(EnsembleArgs),
    /// Run a scenario's [refocus] schedule and write the T2* timeline.
    Refocus(EnsembleArgs),
    /// Write the Ramsey signal of a bath file as CSV, with a T2* fit.
    RamseySignal(SignalArgs),
    /// Run a scenario at every field value and tabulate final narrowing.
    SweepField(SweepArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of nuclear spins.
    #[arg(long = "n", default_value_t = 7)]
    n_spins: usize,
    /// Geometry seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// 13C fraction per lattice site.
    #[arg(long, default_value_t = 0.011)]
    concentration: f64,
    /// No spin closer than this to the electron, nm.
    #[arg(long, default_value_t = 0.5)]
    exclusion_radius: f64,
    /// Radius of the candidate lattice shell, nm.
    #[arg(long, default_value_t = 4.0)]
    max_radius: f64,
    /// Field along the NV axis, tesla.
    #[arg(long, default_value_t = 0.25)]
    field: f64,
    /// Refuse baths larger than this many spins.
    #[arg(long, default_value_t = DEFAULT_MAX_SPINS)]
    max_spins: usize,
    /// Output file.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct Workers {
    /// Parallel runs; 0 uses every core.
    #[arg(long, env = WORKERS_ENV, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct EnsembleArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Output directory; defaults to the scenario's `output`, else out/<name>.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    workers: Workers,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Comma-separated field values in tesla, replacing the scenario's.
    #[arg(long, value_delimiter = ',')]
    fields: Option<Vec<f64>>,
}

#[derive(Args)]
struct SignalArgs {
    /// Bath file written by generate-bath.
    #[arg(long)]
    bath: PathBuf,
    /// Replace the bath's field, tesla.
    #[arg(long)]
    field: Option<f64>,
    /// Narrow the thermal state with this many adaptive measurements first.
    #[arg(long)]
    narrow_steps: Option<usize>,
    /// Seed of the narrowing run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Longest free-evolution time, seconds.
    #[arg(long, default_value_t = 20e-6)]
    tau_max: f64,
    /// Grid points from 0 to tau-max.
    #[arg(long, default_value_t = 400)]
    points: usize,
    /// Output CSV; the fit goes next to it with a .json extension.
    #[arg(long, short)]
    out: PathBuf,
}

fn output_dir(args: &EnsembleArgs, scenario: &Scenario) -> PathBuf {
    args.out
        .clone()
        .or_else(|| scenario.output.clone())
        .unwrap_or_else(|| Path::new("out").join(&scenario.name))
}

fn report(r: &EnsembleReport, dir: &Path) -> i32 {
    let nf = r
        .final_narrowing
        .as_ref()
        .map_or("n/a".to_string(), |s| format!("{:.3} +- {:.3}", s.mean, s.stderr));
    println!(
        "{} @ {} T: {}/{} runs ok, final narrowing {nf} -> {}",
        r.scenario,
        r.field,
        r.succeeded,
        r.ensemble,
        dir.display()
    );
    for f in &r.failures {
        eprintln!("  run {} (seed {}) failed: {}", f.index, f.seed, f.error);
    }
    r.exit_code()
}

fn execute(cli: Cli) -> spinbath::Result<i32> {
    match cli.command {
        Command::GenerateBath(a) => {
            let params = BathParams {
                n_spins: a.n_spins,
                concentration: a.concentration,
                exclusion_radius: a.exclusion_radius,
                max_radius: a.max_radius,
                seed: a.seed,
            };
            let bath = generate_bath_file(&params, &PhysicalConstants::default(), a.field, a.max_spins, &a.out)?;
            println!("{} spins -> {}", bath.n_spins(), a.out.display());
            Ok(0)
        }
        Command::Run(a) => {
            let scenario = Scenario::load(&a.scenario)?;
            let dir = output_dir(&a, &scenario);
            let r = run_ensemble(&scenario, scenario.fields[0], Job::Narrowing, &dir, a.workers.workers)?;
            Ok(report(&r, &dir))
        }
        Command::Refocus(a) => {
            let scenario = Scenario::load(&a.scenario)?;
            let dir = output_dir(&a, &scenario);
            let r = run_ensemble(&scenario, scenario.fields[0], Job::Refocus, &dir, a.workers.workers)?;
            Ok(report(&r, &dir))
        }
        Command::SweepField(a) => {
            let mut scenario = Scenario::load(&a.ensemble.scenario)?;
            if let Some(f) = a.fields {
                scenario.fields = f;
            }
            let dir = output_dir(&a.ensemble, &scenario);
            let (rows, reports) = sweep_field(&scenario, &dir, a.ensemble.workers.workers)?;
            println!("field_t  runs  mean_nf  stderr");
            for row in &rows {
                println!(
                    "{:7.4}  {:4}  {:7.3}  {:6.3}",
                    row.field_t, row.runs, row.mean_narrowing, row.stderr_narrowing
                );
            }
            Ok(reports.iter().map(EnsembleReport::exit_code).max().unwrap_or(0))
        }
        Command::RamseySignal(a) => {
            let mut bath = BathSpec::load(&a.bath)?;
            if let Some(b) = a.field {
                bath = bath.with_field_z(b);
            }
            if !(a.tau_max > 0.0) || a.points < 2 {
                return Err(spinbath::Error::InvalidArgument(
                    "tau-max must be positive and points at least 2".into(),
                ));
            }
            let state = match a.narrow_steps {
                None => SignalState::Thermal,
                Some(n) => SignalState::Narrowed(ProtocolConfig {
                    n_steps: n,
                    seed: a.seed,
                    ..ProtocolConfig::default()
                }),
            };
            let taus = linear_grid(a.tau_max, a.points);
            let fit = ramsey_signal_file(&bath, &HamiltonianOptions::default(), &state, &taus, &a.out)?;
            match (fit.t2, fit.error) {
                (Some(t2), _) => {
                    println!("T2* = {:.3} us -> {}", t2 * 1e6, a.out.display());
                    Ok(0)
                }
                (None, err) => {
                    eprintln!("T2* fit failed: {}", err.unwrap_or_default());
                    Ok(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
