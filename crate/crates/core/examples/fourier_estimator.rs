// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Drives the Fourier-series estimator by hand: a few simulated Ramsey
//! outcomes for a known hyperfine shift, printing the belief after each.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinbath::bayes::{likelihood, FourierDistribution, Prior};

fn main() -> spinbath::Result<()> {
    let tau0 = 1e-6;
    let true_shift = 83e3;
    let mut belief = FourierDistribution::init_prior(Prior::Uniform, tau0, 256)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    println!(" k  phase  mu   estimate (kHz)  sigma (kHz)");
    for k in 0..6u32 {
        for _ in 0..3 {
            let phi = rng.random::<f64>() * PI;
            let tau = f64::from(1u32 << k) * tau0;
            let p0 = likelihood(0, true_shift, tau, phi, f64::INFINITY);
            let mu = u8::from(rng.random::<f64>() >= p0);
            belief = belief.update(mu, k, phi, f64::INFINITY)?;
            println!(
                "{k:2}  {phi:5.2}  {mu:2}   {:14.2}  {:11.3}",
                belief.estimate_mean()? * 1e-3,
                belief.sigma_hz() * 1e-3
            );
        }
    }
    println!("true shift {:.2} kHz", true_shift * 1e-3);
    Ok(())
}
