// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Measurement-setting heuristics: sensing time from the belief width,
//! detection phase from the coefficient at the sensing frequency.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::bayes::FourierDistribution;

/// Largest `k` with `2^k tau0 <= 1/sigma` (shifted by `c`), clamped to
/// `[0, k_max]`. A uniform belief gives 0, a delta belief `k_max`.
pub fn select_k(dist: &FourierDistribution, c: f64, k_max: u32) -> u32 {
    let sigma = dist.sigma_hz();
    if !sigma.is_finite() {
        return 0;
    }
    if sigma == 0.0 {
        return k_max;
    }
    let raw = ((1.0 / (sigma * dist.tau0)).log2() + c).floor();
    raw.clamp(0.0, f64::from(k_max)) as u32
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseChoice {
    /// Radians.
    pub phi: f64,
    /// The coefficient at `-2^k` was zero and the phase defaulted to 0.
    pub fallback: bool,
}

/// `arg(p_{-2^k}) / 2`, plus `pi/2` when both outcomes are given and differ.
pub fn select_phase(
    dist: &FourierDistribution,
    k: u32,
    prev_outcome: Option<u8>,
    current_outcome: Option<u8>,
) -> PhaseChoice {
    let c = dist.coeff(-(1i64 << k));
    let (base, fallback) = if c.norm() == 0.0 { (0.0, true) } else { (0.5 * c.arg(), false) };
    PhaseChoice {
        phi: base + conditional_shift(prev_outcome, current_outcome),
        fallback,
    }
}

/// Phase minimising [`FourierDistribution::expected_holevo_variance`]: a
/// 720-point scan over `[0, pi)` (the objective has period pi), refined by
/// golden section. Ties resolve to the smallest phase.
pub fn min_holevo_phase(dist: &FourierDistribution, k: u32, t2_estimate: f64) -> f64 {
    const SCAN: usize = 720;
    let f = |phi: f64| dist.expected_holevo_variance(k, phi, t2_estimate);
    let step = PI / SCAN as f64;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..SCAN {
        let phi = step * i as f64;
        let v = f(phi);
        if v < best.0 {
            best = (v, phi);
        }
    }
    if !best.0.is_finite() {
        return 0.0;
    }
    let (mut a, mut b) = (best.1 - step, best.1 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..40 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) <= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let phi = 0.5 * (a + b);
    if f(phi) <= best.0 {
        phi
    } else {
        best.1
    }
}

pub fn conditional_shift(prev_outcome: Option<u8>, current_outcome: Option<u8>) -> f64 {
    match (prev_outcome, current_outcome) {
        (Some(a), Some(b)) if a != b => FRAC_PI_2,
        _ => 0.0,
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut x = phi.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}
