// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Geometry and coupling tensors of sampled baths.

use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use spinbath::bathgen::{sample_bath, secular_correction, BathParams, PhysicalConstants};

fn params(n_spins: usize, seed: u64) -> BathParams {
    BathParams { n_spins, seed, ..BathParams::default() }
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn seven_spin_bath_at_natural_abundance() {
    let b = sample_bath(&params(7, 1), &PhysicalConstants::default()).unwrap();
    assert_eq!(b.n_spins(), 7);
    assert_eq!(b.couplings.len(), 21);
    assert!(b.couplings.iter().all(|c| c.tensor == c.tensor.transpose() || (c.tensor - c.tensor.transpose()).norm() < 1e-9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hyperfine_tensors_are_symmetric_traceless_dipoles(seed in any::<u64>(), n in 2usize..10) {
        let b = sample_bath(&params(n, seed), &PhysicalConstants::default()).unwrap();
        let mut r = Vec::new();
        let mut norm = Vec::new();
        for (p, a) in b.positions.iter().zip(&b.hyperfine_tensors) {
            prop_assert!((a - a.transpose()).norm() <= 1e-9 * a.norm());
            prop_assert!(a.trace().abs() <= 1e-9 * a.norm());
            r.push(p.norm());
            norm.push(a.norm());
        }
        let distinct = r.iter().any(|x| (x / r[0] - 1.0).abs() > 1e-6);
        if distinct {
            let slope = log_log_slope(&r, &norm);
            prop_assert!((slope + 3.0).abs() <= 0.01, "slope {slope}");
        }
    }

    #[test]
    fn same_seed_same_bytes(seed in any::<u64>(), n in 1usize..9) {
        let c = PhysicalConstants::default();
        let a = sample_bath(&params(n, seed), &c).unwrap().to_json().unwrap();
        let b = sample_bath(&params(n, seed), &c).unwrap().to_json().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn secular_correction_structure(seed in any::<u64>()) {
        let c = PhysicalConstants::default();
        let b = sample_bath(&params(2, seed), &c).unwrap();
        let (ai, aj) = (&b.hyperfine_tensors[0], &b.hyperfine_tensors[1]);
        for mu in 0..2u8 {
            let ij = secular_correction(ai, aj, mu, &c);
            let ji = secular_correction(aj, ai, mu, &c);
            prop_assert!((ij.transpose() - ji).norm() <= 1e-12 * ij.norm().max(1e-300));
        }
        let c0 = secular_correction(ai, aj, 0, &c);
        let c1 = secular_correction(ai, aj, 1, &c);
        prop_assert!((c1 + 0.5 * c0).norm() <= 1e-10 * c0.norm());

        let zz = |a: &Matrix3<f64>| Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, a[(2, 2)]));
        prop_assert_eq!(secular_correction(&zz(ai), &zz(aj), 0, &c), Matrix3::zeros());
    }
}
