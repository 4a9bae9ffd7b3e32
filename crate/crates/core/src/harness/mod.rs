// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario files, seeded parallel ensembles and result files.
//!
//! Every CSV starts with one `#` line naming the column format version, the
//! crate version and the source revision. Outputs depend only on the
//! scenario and master seed: runs are independent, each draws from its own
//! seed (see [`run_seed`]), and results are written in run order after all
//! workers finish.

mod commands;
mod ensemble;
mod output;
mod scenario;
mod seed;

pub use commands::{generate_bath_file, ramsey_signal_file, SignalFit, SignalState};
pub use ensemble::{
    par_map, run_ensemble, sweep_field, EnsembleReport, FailedRun, FieldRow, Job, RunLine, RunOutput, WORKERS_ENV,
};
pub use output::{write_csv_rows, Stats};
pub use scenario::{
    BathSource, FileSettings, GenerateSettings, Mode, NonadaptiveSettings, RefocusSettings, Scenario,
};
pub use seed::{run_seed, splitmix64, SeedStream};
