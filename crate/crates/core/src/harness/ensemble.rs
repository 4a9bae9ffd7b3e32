// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bathgen::{sample_bath, BathSpec};
use crate::controller::{run_adaptive, run_nonadaptive, run_refocus_schedule, ProtocolConfig, ProtocolRun};
use crate::error::{Error, Result};
use crate::harness::output::{self, Stats};
use crate::harness::scenario::{BathSource, Mode, Scenario};
use crate::harness::seed::{run_seed, SeedStream};
use crate::qsim::{BathDynamics, BathState};

/// Environment variable read by the command-line tool for the worker count.
pub const WORKERS_ENV: &str = "SPINBATH_WORKERS";

/// Which protocol an ensemble runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Job {
    /// The scenario's `mode`: adaptive or fixed-time narrowing.
    Narrowing,
    /// The scenario's `[refocus]` schedule.
    Refocus,
}

/// Maps `f` over `0..n` on a pool of `workers` threads (0 picks the number of
/// cores). Results come back in index order whatever the scheduling.
pub fn par_map<T, F>(n: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..n).into_par_iter().map(&f).collect()))
}

/// A finished run and the bath it ran on.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub index: usize,
    pub seed: u64,
    pub bath_seed: Option<u64>,
    pub bath: BathSpec,
    pub initial: BathState,
    pub run: ProtocolRun,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailedRun {
    pub index: usize,
    pub seed: u64,
    pub error: String,
}

/// What an ensemble produced, as written to `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub format: String,
    pub scenario: String,
    pub field: f64,
    pub master_seed: u64,
    pub ensemble: usize,
    pub succeeded: usize,
    pub failures: Vec<FailedRun>,
    pub final_narrowing: Option<Stats>,
    pub runs: Vec<RunLine>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunLine {
    pub index: usize,
    pub seed: u64,
    pub bath_seed: Option<u64>,
    pub measurements: usize,
    pub elapsed: f64,
    pub final_narrowing: f64,
    pub saturated: bool,
    pub final_peaks: usize,
    pub final_main_mass: f64,
    pub initial_t2: Option<f64>,
    pub final_t2: Option<f64>,
}

impl EnsembleReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }

    /// 0 when every run succeeded, 3 when some failed, 4 when all failed.
    pub fn exit_code(&self) -> i32 {
        match (self.succeeded, self.failures.len()) {
            (_, 0) => 0,
            (0, _) => 4,
            _ => 3,
        }
    }
}

/// Baths and dynamics for one field value. Shared baths are diagonalized
/// once and cloned into each run.
struct BathPlan<'a> {
    scenario: &'a Scenario,
    field: f64,
    shared: Option<(BathSpec, BathDynamics, Option<u64>)>,
}

impl<'a> BathPlan<'a> {
    fn new(scenario: &'a Scenario, field: f64) -> Result<Self> {
        let opts = scenario.hamiltonian_options();
        let shared = match &scenario.bath {
            BathSource::File(_) => {
                let bath = scenario.load_bath_file()?.expect("file source").with_field_z(field);
                let dynamics = BathDynamics::from_bath(&bath, &opts)?;
                Some((bath, dynamics, None))
            }
            BathSource::Generate(g) if !g.per_run => {
                let bath = sample_bath(&g.params(g.seed), &g.constants)?.with_field_z(field);
                let dynamics = BathDynamics::from_bath(&bath, &opts)?;
                Some((bath, dynamics, Some(g.seed)))
            }
            BathSource::Generate(_) => None,
        };
        Ok(Self { scenario, field, shared })
    }

    fn bath(&self, index: usize) -> Result<(BathSpec, BathDynamics, Option<u64>)> {
        if let Some((b, d, s)) = &self.shared {
            return Ok((b.clone(), d.clone(), *s));
        }
        let BathSource::Generate(g) = &self.scenario.bath else {
            unreachable!("file baths are shared")
        };
        let seed = run_seed(self.scenario.master_seed, index as u64, SeedStream::Bath);
        let bath = sample_bath(&g.params(seed), &g.constants)?.with_field_z(self.field);
        let dynamics = BathDynamics::from_bath(&bath, &self.scenario.hamiltonian_options())?;
        Ok((bath, dynamics, Some(seed)))
    }
}

fn execute_one(plan: &BathPlan<'_>, job: Job, index: usize) -> std::result::Result<RunOutput, FailedRun> {
    let s = plan.scenario;
    let seed = run_seed(s.master_seed, index as u64, SeedStream::Protocol);
    let attempt = || -> Result<RunOutput> {
        let (bath, mut dynamics, bath_seed) = plan.bath(index)?;
        let initial = BathState::thermal(bath.n_spins());
        let cfg = ProtocolConfig {
            seed,
            ..s.protocol.clone()
        };
        let run = match job {
            Job::Narrowing => match s.mode {
                Mode::Adaptive => run_adaptive(&bath, &mut dynamics, &initial, &cfg)?,
                Mode::Nonadaptive => {
                    let na = &s.nonadaptive;
                    run_nonadaptive(&bath, &mut dynamics, &initial, na.tau, na.phi, na.steps, seed)?
                }
            },
            Job::Refocus => {
                let r = s
                    .refocus
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("scenario has no [refocus] table".into()))?;
                let mut opts = r.options.clone();
                opts.keep_states |= index < s.snapshots;
                run_refocus_schedule(&bath, &mut dynamics, &initial, &cfg, &r.schedule, &opts)?
            }
        };
        Ok(RunOutput {
            index,
            seed,
            bath_seed,
            bath,
            initial,
            run,
        })
    };
    attempt().map_err(|e| {
        log::warn!("run {index} (seed {seed}) failed: {e}");
        FailedRun {
            index,
            seed,
            error: e.to_string(),
        }
    })
}

/// Runs the ensemble at one field value and writes its files into `out`.
///
/// Files: `runs/run_NNNNN.{csv,json}` per successful run, `aggregate.csv`
/// (per-step mean and standard deviation of the narrowing factor),
/// `summary.json`, and for the first `snapshots` runs the true and estimated
/// distributions under `snapshots/`. Refocus jobs add `timeline.csv` and
/// Ramsey-signal snapshots at every segment boundary.
pub fn run_ensemble(scenario: &Scenario, field: f64, job: Job, out: &Path, workers: usize) -> Result<EnsembleReport> {
    scenario.validate()?;
    if job == Job::Refocus && scenario.refocus.is_none() {
        return Err(Error::InvalidArgument("scenario has no [refocus] table".into()));
    }
    let plan = BathPlan::new(scenario, field)?;
    log::info!(
        "{}: {} runs at {field} T on {} workers",
        scenario.name,
        scenario.ensemble,
        if workers == 0 { "all".to_string() } else { workers.to_string() }
    );
    let results = par_map(scenario.ensemble, workers, |i| execute_one(&plan, job, i))?;

    output::prepare_dir(out)?;
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(o) => ok.push(o),
            Err(f) => failures.push(f),
        }
    }
    for o in &ok {
        output::write_run(out, o)?;
        if o.index < scenario.snapshots {
            output::write_snapshots(out, o, scenario)?;
        }
    }
    let traces: Vec<&ProtocolRun> = ok.iter().map(|o| &o.run).collect();
    output::write_aggregate(&out.join("aggregate.csv"), &traces)?;
    if job == Job::Refocus {
        output::write_timeline(&out.join("timeline.csv"), &ok)?;
    }
    let finals: Vec<f64> = ok.iter().map(|o| o.run.trace.summary.final_narrowing).collect();
    let report = EnsembleReport {
        format: "spinbath-summary/1".into(),
        scenario: scenario.name.clone(),
        field,
        master_seed: scenario.master_seed,
        ensemble: scenario.ensemble,
        succeeded: ok.len(),
        failures,
        final_narrowing: Stats::of(&finals),
        runs: ok.iter().map(run_line).collect(),
    };
    output::write_json(&out.join("summary.json"), &report)?;
    Ok(report)
}

fn run_line(o: &RunOutput) -> RunLine {
    let s = &o.run.trace.summary;
    RunLine {
        index: o.index,
        seed: o.seed,
        bath_seed: o.bath_seed,
        measurements: s.measurements,
        elapsed: s.elapsed,
        final_narrowing: s.final_narrowing,
        saturated: s.saturated,
        final_peaks: s.final_peaks,
        final_main_mass: s.final_main_mass,
        initial_t2: s.initial_t2,
        final_t2: s.final_t2,
    }
}

/// One row of `field_sweep.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub field_t: f64,
    pub runs: usize,
    pub failed: usize,
    pub mean_narrowing: f64,
    pub std_narrowing: f64,
    pub stderr_narrowing: f64,
}

/// Runs the scenario at every field value into `out/field_<B>T/` and writes
/// `out/field_sweep.csv`. Run `i` uses the same seeds at every field, so the
/// sweep compares identical bath geometries.
pub fn sweep_field(scenario: &Scenario, out: &Path, workers: usize) -> Result<(Vec<FieldRow>, Vec<EnsembleReport>)> {
    scenario.validate()?;
    output::prepare_dir(out)?;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &b in &scenario.fields {
        let dir = out.join(format!("field_{b:.4}T"));
        let report = run_ensemble(scenario, b, Job::Narrowing, &dir, workers)?;
        let st = report.final_narrowing.clone().unwrap_or(Stats::EMPTY);
        rows.push(FieldRow {
            field_t: b,
            runs: report.succeeded,
            failed: report.failures.len(),
            mean_narrowing: st.mean,
            std_narrowing: st.std,
            stderr_narrowing: st.stderr,
        });
        reports.push(report);
    }
    output::write_csv_rows(&out.join("field_sweep.csv"), &rows)?;
    Ok((rows, reports))
}
