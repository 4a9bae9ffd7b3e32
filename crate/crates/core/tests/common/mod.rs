// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use spinbath::bathgen::{sample_bath, BathParams, BathSpec, PhysicalConstants};
use spinbath::bayes::{likelihood, FourierDistribution, Prior};
use spinbath::linalg::C64;
use spinbath::qsim::{BathDynamics, HamiltonianOptions};

pub const TAU0: f64 = 1e-6;

/// Grid points on one estimator period.
pub const GRID: usize = 4096;

/// Sampled 13C bath at `field` tesla.
pub fn bath(n_spins: usize, seed: u64, field: f64) -> BathSpec {
    let params = BathParams { n_spins, seed, ..BathParams::default() };
    sample_bath(&params, &PhysicalConstants::default()).unwrap().with_field_z(field)
}

pub fn dynamics(bath: &BathSpec) -> BathDynamics {
    BathDynamics::from_bath(bath, &HamiltonianOptions::default()).unwrap()
}

/// Mixture of two to four wrapped Gaussians, truncated at |j| = 64 so that
/// updates with k <= 6 stay exact in a J_max = 128 representation.
pub fn mixture_prior<R: Rng>(rng: &mut R) -> FourierDistribution {
    const J: usize = 128;
    const KEEP: usize = 64;
    let parts = rng.random_range(2..=4);
    let mut coeffs = vec![C64::new(0.0, 0.0); J + 1];
    for _ in 0..parts {
        let weight = rng.random_range(0.1..1.0);
        let center = rng.random_range(-0.5..0.5) / TAU0;
        let width = rng.random_range(20e3..150e3);
        let g = FourierDistribution::init_prior(Prior::Gaussian { center, width }, TAU0, J).unwrap();
        for (j, c) in coeffs.iter_mut().enumerate().take(KEEP + 1) {
            *c += g.coeff(j as i64) * weight;
        }
    }
    FourierDistribution::from_coefficients(coeffs, TAU0).unwrap()
}

/// Density on the grid from the coefficient list, summed term by term.
fn density(dist: &FourierDistribution, a: f64) -> f64 {
    let theta = 2.0 * PI * a * dist.tau0;
    dist.coefficients()
        .iter()
        .map(|(j, c)| (c * C64::from_polar(1.0, *j as f64 * theta)).re)
        .sum()
}

/// L1 distance, over one period, between the normalised grid posterior
/// `prior x likelihood` and the density of `post`.
pub fn grid_bayes_l1(prior: &FourierDistribution, post: &FourierDistribution, mu: u8, k: u32, phi: f64, t2: f64) -> f64 {
    let tau = f64::from(1u32 << k) * prior.tau0;
    let da = 1.0 / (prior.tau0 * GRID as f64);
    let grid: Vec<f64> = (0..GRID).map(|i| i as f64 * da).collect();
    let mut oracle: Vec<f64> = grid.iter().map(|&a| density(prior, a) * likelihood(mu, a, tau, phi, t2)).collect();
    let norm: f64 = oracle.iter().sum::<f64>() * da;
    oracle.iter_mut().for_each(|p| *p /= norm);
    let post_norm: f64 = grid.iter().map(|&a| density(post, a)).sum::<f64>() * da;
    grid.iter()
        .zip(&oracle)
        .map(|(&a, o)| (density(post, a) / post_norm - o).abs() * da)
        .sum()
}

/// Adaptive schedule (G=3, F=2, C=-2) against synthetic outcomes drawn from
/// the likelihood at a fixed true shift. Returns the Holevo variance after
/// every update, the final estimate and its width in Hz.
pub fn synthetic_adaptive(true_shift: f64, shots: usize, seed: u64) -> (Vec<f64>, f64, f64) {
    use rand::SeedableRng;
    use spinbath::controller::{conditional_shift, min_holevo_phase, select_k};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let prior = Prior::Gaussian { center: 0.0, width: 1.0 / TAU0 };
    let mut dist = FourierDistribution::init_prior(prior, TAU0, 1 << 14).unwrap();
    let mut variances = vec![dist.holevo_variance()];
    let mut outcomes: [Option<u8>; 2] = [None, None];
    while variances.len() <= shots {
        let k = select_k(&dist, -2.0, 10);
        for _ in 0..(3 + 2 * k) {
            if variances.len() > shots {
                break;
            }
            let phi = min_holevo_phase(&dist, k, f64::INFINITY) + conditional_shift(outcomes[0], outcomes[1]);
            let p0 = likelihood(0, true_shift, f64::from(1u32 << k) * TAU0, phi, f64::INFINITY);
            let mu = u8::from(rng.random::<f64>() >= p0);
            dist = dist.update(mu, k, phi, f64::INFINITY).unwrap();
            outcomes = [outcomes[1], Some(mu)];
            variances.push(dist.holevo_variance());
        }
    }
    (variances, dist.estimate_mean().unwrap(), dist.sigma_hz())
}
