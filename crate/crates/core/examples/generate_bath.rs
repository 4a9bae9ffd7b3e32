// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Samples a 7-spin 13C bath and prints its hyperfine couplings.
//!
//! `cargo run --release --example generate_bath -- [seed] [out.json]`

use std::path::PathBuf;

use spinbath::bathgen::{sample_bath, BathParams, BathSpec, PhysicalConstants};

fn main() -> spinbath::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(1, |s| s.parse().expect("seed must be an integer"));
    let params = BathParams { seed, ..BathParams::default() };
    let bath = sample_bath(&params, &PhysicalConstants::default())?.with_field_z(0.25);

    println!("spin    r (nm)     A_zx (kHz)  A_zy (kHz)  A_zz (kHz)");
    for (i, (pos, a)) in bath.positions.iter().zip(&bath.hyperfine_vectors).enumerate() {
        println!(
            "{i:4}  {:8.3}  {:10.2}  {:10.2}  {:10.2}",
            pos.norm(),
            a.x * 1e-3,
            a.y * 1e-3,
            a.z * 1e-3
        );
    }
    let strongest = bath
        .couplings
        .iter()
        .max_by(|a, b| a.tensor.abs().max().total_cmp(&b.tensor.abs().max()))
        .expect("a 7-spin bath has pairs");
    println!(
        "strongest nuclear pair: {}-{}, {:.1} Hz",
        strongest.i,
        strongest.j,
        strongest.tensor.abs().max()
    );

    let out = args.next().map_or_else(|| std::env::temp_dir().join("spinbath_bath.json"), PathBuf::from);
    bath.save(&out)?;
    let back = BathSpec::load(&out)?;
    assert_eq!(back.n_spins(), bath.n_spins());
    println!("saved to {}", out.display());
    Ok(())
}
