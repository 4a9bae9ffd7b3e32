// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! One adaptive narrowing run on a 7-spin bath at 250 mT, printing the
//! sensing time, outcome and true narrowing factor after every shot.

use spinbath::bathgen::{sample_bath, BathParams, PhysicalConstants};
use spinbath::controller::{run_adaptive, ProtocolConfig};
use spinbath::qsim::{BathDynamics, BathState, HamiltonianOptions};

fn main() -> spinbath::Result<()> {
    let bath = sample_bath(&BathParams::default(), &PhysicalConstants::default())?.with_field_z(0.25);
    let mut dynamics = BathDynamics::from_bath(&bath, &HamiltonianOptions::default())?;
    let thermal = BathState::thermal(bath.n_spins());
    let cfg = ProtocolConfig { seed: 11, ..ProtocolConfig::default() };
    let run = run_adaptive(&bath, &mut dynamics, &thermal, &cfg)?;

    println!("step  k  tau (us)  mu   estimate (kHz)  true mean (kHz)  N.F.");
    for r in &run.trace.records {
        println!(
            "{:4} {:>2} {:>9} {:>3} {:>16} {:>16.2} {:6.2}",
            r.step,
            r.k.map_or("-".into(), |k| k.to_string()),
            r.tau.map_or("-".into(), |t| format!("{:.0}", t * 1e6)),
            r.outcome.map_or("-".into(), |m| m.to_string()),
            r.estimate.map_or("-".into(), |e| format!("{:.2}", e * 1e-3)),
            r.true_mean * 1e-3,
            r.narrowing
        );
    }
    let s = &run.trace.summary;
    let t2 = |t: Option<f64>| t.map_or("none".into(), |t| format!("{:.1} us", t * 1e6));
    println!("T2*: {} -> {}", t2(s.initial_t2), t2(s.final_t2));
    Ok(())
}
