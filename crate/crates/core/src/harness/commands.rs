// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bathgen::{sample_bath, BathParams, BathSpec, PhysicalConstants};
use crate::controller::{run_adaptive, ProtocolConfig};
use crate::error::{Error, Result};
use crate::harness::output::{write_csv_rows, write_json};
use crate::qsim::{fit_t2, ramsey_signal, BathDynamics, BathState, HamiltonianOptions};

/// Samples a bath, checks it against the dense-simulation limit and writes
/// it to `path`.
pub fn generate_bath_file(
    params: &BathParams,
    constants: &PhysicalConstants,
    field: f64,
    max_spins: usize,
    path: &Path,
) -> Result<BathSpec> {
    if params.n_spins > max_spins {
        return Err(Error::DimensionOverflow {
            n: params.n_spins,
            max: max_spins,
        });
    }
    let bath = sample_bath(params, constants)?.with_field_z(field);
    bath.save(path)?;
    Ok(bath)
}

/// State whose Ramsey signal is recorded.
#[derive(Clone, Debug, PartialEq)]
pub enum SignalState {
    Thermal,
    /// Thermal state after one adaptive narrowing run.
    Narrowed(ProtocolConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalFit {
    /// Seconds; `None` when the fit failed.
    pub t2: Option<f64>,
    pub residual: Option<f64>,
    pub error: Option<String>,
    pub narrowing: Option<f64>,
}

#[derive(Serialize)]
struct SignalRow {
    tau_s: f64,
    re: f64,
    im: f64,
    abs: f64,
    fit: Option<f64>,
}

/// Writes `S_R` on `taus` to `out` (CSV) and the T2* fit to `out` with a
/// `.json` extension. The fit outcome is returned; a failed fit still writes
/// both files.
pub fn ramsey_signal_file(
    bath: &BathSpec,
    opts: &HamiltonianOptions,
    state: &SignalState,
    taus: &[f64],
    out: &Path,
) -> Result<SignalFit> {
    if taus.is_empty() {
        return Err(Error::InvalidArgument("empty tau grid".into()));
    }
    let mut dynamics = BathDynamics::from_bath(bath, opts)?;
    let thermal = BathState::thermal(bath.n_spins());
    let (rho, narrowing) = match state {
        SignalState::Thermal => (thermal, None),
        SignalState::Narrowed(cfg) => {
            let run = run_adaptive(bath, &mut dynamics, &thermal, cfg)?;
            let nf = run.trace.summary.final_narrowing;
            (run.state, Some(nf))
        }
    };
    let signal = ramsey_signal(&rho, &dynamics, taus);
    let mag: Vec<f64> = signal.iter().map(|s| s.norm()).collect();
    let fit = match fit_t2(&mag, taus) {
        Ok(f) => SignalFit {
            t2: Some(f.t2),
            residual: Some(f.residual),
            error: None,
            narrowing,
        },
        Err(e) => SignalFit {
            t2: None,
            residual: None,
            error: Some(e.to_string()),
            narrowing,
        },
    };
    let rows: Vec<SignalRow> = signal
        .iter()
        .zip(taus)
        .map(|(s, &t)| SignalRow {
            tau_s: t,
            re: s.re,
            im: s.im,
            abs: s.norm(),
            fit: fit.t2.map(|t2| (-(t / t2).powi(2)).exp()),
        })
        .collect();
    write_csv_rows(out, &rows)?;
    write_json(&out.with_extension("json"), &fit)?;
    Ok(fit)
}
