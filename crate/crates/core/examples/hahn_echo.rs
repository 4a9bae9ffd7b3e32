// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Hahn-echo and Ramsey decay of a thermal 7-spin bath.

use spinbath::bathgen::{sample_bath, BathParams, PhysicalConstants};
use spinbath::qsim::{
    echo_decay_time, fit_t2, grid_for_width, hyperfine_distribution, ramsey_signal, BathDynamics, BathState,
    HamiltonianOptions,
};

fn main() -> spinbath::Result<()> {
    let bath = sample_bath(&BathParams { seed: 3, ..BathParams::default() }, &PhysicalConstants::default())?
        .with_field_z(0.25);
    let dynamics = BathDynamics::from_bath(&bath, &HamiltonianOptions::default())?;
    let thermal = BathState::thermal(bath.n_spins());

    let sigma = hyperfine_distribution(&thermal, &bath)?.std_dev();
    let taus = grid_for_width(sigma, 300);
    let mag: Vec<f64> = ramsey_signal(&thermal, &dynamics, &taus).iter().map(|s| s.norm()).collect();
    let t2_star = fit_t2(&mag, &taus)?.t2;
    let t2 = echo_decay_time(&thermal, &dynamics, 1.0, 1e-3)?;

    println!("hyperfine spread sigma_z = {:.1} kHz", sigma * 1e-3);
    println!("Ramsey T2* = {:.2} us", t2_star * 1e6);
    match t2 {
        Some(t) => println!("echo T2 = {:.2} ms", t * 1e3),
        None => println!("echo does not decay within 1 s"),
    }
    Ok(())
}
