// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Four spins in two decoupled pairs: the exact post-measurement state
//! differs from the product of per-pair updates.

use spinbath::bathgen::{sample_bath, BathParams, PhysicalConstants};
use spinbath::qsim::{cluster_counterexample, HamiltonianOptions};

fn main() -> spinbath::Result<()> {
    let params = BathParams { n_spins: 4, seed: 1, ..BathParams::default() };
    let bath = sample_bath(&params, &PhysicalConstants::default())?.with_field_z(0.25);
    let partition = [vec![0, 1], vec![2, 3]];
    println!("tau (us)  ||rho_exact - rho_a x rho_b||_F");
    for tau in [0.0, 1e-6, 3.7e-6, 10e-6, 25e-6] {
        let d = cluster_counterexample(&bath, &partition, tau, 0.4, &HamiltonianOptions::default())?;
        println!("{:8.1}  {d:.3e}", tau * 1e6);
    }
    Ok(())
}
