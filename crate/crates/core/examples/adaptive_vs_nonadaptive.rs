// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Compares adaptive narrowing with repeated fixed-time Ramsey shots on one
//! bath: final narrowing factor and peak structure over a few seeds.

use spinbath::bathgen::{sample_bath, BathParams, PhysicalConstants};
use spinbath::controller::{run_adaptive, run_nonadaptive, ProtocolConfig};
use spinbath::qsim::{hyperfine_distribution, BathDynamics, BathState, HamiltonianOptions};

fn main() -> spinbath::Result<()> {
    let bath = sample_bath(&BathParams::default(), &PhysicalConstants::default())?.with_field_z(0.25);
    let mut dynamics = BathDynamics::from_bath(&bath, &HamiltonianOptions::default())?;
    let thermal = BathState::thermal(bath.n_spins());
    let sigma0 = hyperfine_distribution(&thermal, &bath)?.std_dev();

    println!("seed  adaptive N.F. peaks mass   fixed N.F. peaks mass");
    for seed in 0..10 {
        let cfg = ProtocolConfig { seed, ..ProtocolConfig::default() };
        let a = run_adaptive(&bath, &mut dynamics, &thermal, &cfg)?;
        let n = run_nonadaptive(&bath, &mut dynamics, &thermal, 1e-6, 0.0, 20, seed)?;
        let pa = hyperfine_distribution(&a.state, &bath)?.peaks(cfg.peak_bandwidth * sigma0);
        let pn = hyperfine_distribution(&n.state, &bath)?.peaks(cfg.peak_bandwidth * sigma0);
        println!(
            "{seed:4}  {:13.2} {:5} {:4.2}   {:10.2} {:5} {:4.2}",
            a.trace.summary.final_narrowing,
            pa.n_peaks,
            pa.main_mass,
            n.trace.summary.final_narrowing,
            pn.n_peaks,
            pn.main_mass
        );
    }
    Ok(())
}
