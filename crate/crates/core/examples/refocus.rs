// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Narrow, let the bath evolve freely, narrow again, and follow T2* across
//! the segment boundaries.

use spinbath::bathgen::{sample_bath, BathParams, PhysicalConstants};
use spinbath::controller::{run_refocus_schedule, ProtocolConfig, RefocusOptions, Segment};
use spinbath::qsim::{BathDynamics, BathState, HamiltonianOptions};

fn main() -> spinbath::Result<()> {
    let bath = sample_bath(&BathParams { seed: 2, ..BathParams::default() }, &PhysicalConstants::default())?
        .with_field_z(0.25);
    let mut dynamics = BathDynamics::from_bath(&bath, &HamiltonianOptions::default())?;
    let cfg = ProtocolConfig { g: 1, f: 0, nf_cap: Some(12.0), seed: 2, ..ProtocolConfig::default() };
    let schedule = [
        Segment::Narrow { steps: None, duration: Some(1e-3) },
        Segment::Free { duration: 8e-3 },
        Segment::Narrow { steps: None, duration: Some(3e-4) },
    ];
    let run = run_refocus_schedule(
        &bath,
        &mut dynamics,
        &BathState::thermal(bath.n_spins()),
        &cfg,
        &schedule,
        &RefocusOptions::default(),
    )?;

    let t2 = |t: Option<f64>| t.map_or("no decay".into(), |t| format!("{:.1} us", t * 1e6));
    println!("initial: T2* {}", t2(run.trace.summary.initial_t2));
    for seg in &run.trace.segments {
        println!(
            "{:?} segment ends at {:.2} ms after {} shots: N.F. {:.2}, T2* {}",
            seg.kind,
            seg.end * 1e3,
            seg.measurements,
            seg.narrowing,
            t2(seg.t2)
        );
    }
    Ok(())
}
