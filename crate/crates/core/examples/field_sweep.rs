// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Mean final narrowing factor against magnetic field on a handful of baths.
//! The same geometries are used at every field.

use spinbath::bathgen::{sample_bath, BathParams, PhysicalConstants};
use spinbath::controller::{run_adaptive, ProtocolConfig};
use spinbath::harness::{par_map, Stats};
use spinbath::qsim::{BathDynamics, BathState, HamiltonianOptions};

fn main() -> spinbath::Result<()> {
    let baths = 8;
    println!("field (T)  mean N.F.  stderr");
    for field in [0.05, 0.1, 0.15, 0.2, 0.25] {
        let finals = par_map(baths, 0, |i| -> spinbath::Result<f64> {
            let params = BathParams { seed: 100 + i as u64, ..BathParams::default() };
            let bath = sample_bath(&params, &PhysicalConstants::default())?.with_field_z(field);
            let mut dynamics = BathDynamics::from_bath(&bath, &HamiltonianOptions::default())?;
            let cfg = ProtocolConfig { seed: i as u64, ..ProtocolConfig::default() };
            let run = run_adaptive(&bath, &mut dynamics, &BathState::thermal(bath.n_spins()), &cfg)?;
            Ok(run.trace.summary.final_narrowing)
        })?
        .into_iter()
        .collect::<spinbath::Result<Vec<f64>>>()?;
        let st = Stats::of(&finals).expect("non-empty ensemble");
        println!("{field:9.2}  {:9.2}  {:6.2}", st.mean, st.stderr);
    }
    Ok(())
}
