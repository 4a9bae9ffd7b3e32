// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Free-induction (Ramsey) signal of the central spin and T2* extraction.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{mul, trace_mul_adj, C64};
use crate::qsim::hamiltonian::BathDynamics;
use crate::qsim::state::BathState;

/// `S_R(tau) = Tr(U_0(tau) rho U_1(tau)^dagger)` on every grid point.
///
/// Evaluated in the two eigenbases: with `X = V_0^dagger rho V_1` and
/// `W = V_1^dagger V_0`, `S_R = sum_ab e^{-i 2pi (E0_a - E1_b) tau} X_ab W_ba`,
/// which costs O(d^2) per time point instead of two d^3 products.
pub fn ramsey_signal(state: &BathState, dynamics: &BathDynamics, taus: &[f64]) -> Vec<C64> {
    let e0 = dynamics.eigen(0);
    let e1 = dynamics.eigen(1);
    let x = mul(mul(e0.vectors.adjoint(), state.rho.as_ref()).as_ref(), e1.vectors.as_ref());
    let w = mul(e1.vectors.adjoint(), e0.vectors.as_ref());
    let d = state.dim();
    // xw[a][b] = X_ab W_ba
    let mut xw = vec![C64::new(0.0, 0.0); d * d];
    for a in 0..d {
        for b in 0..d {
            xw[a * d + b] = x[(a, b)] * w[(b, a)];
        }
    }
    taus.iter()
        .map(|&tau| {
            let f1: Vec<C64> = e1.values.iter().map(|&e| C64::from_polar(1.0, 2.0 * PI * e * tau)).collect();
            let mut s = C64::new(0.0, 0.0);
            for a in 0..d {
                let row = &xw[a * d..(a + 1) * d];
                let inner: C64 = row.iter().zip(&f1).map(|(v, f)| v * f).sum();
                s += C64::from_polar(1.0, -2.0 * PI * e0.values[a] * tau) * inner;
            }
            s
        })
        .collect()
}

/// Hahn-echo coherence after `R(pi/2) - U(t) - R(pi) - U(t) - R(pi/2)`:
/// `S_E(t) = Tr(U_1(t) U_0(t) rho (U_0(t) U_1(t))^dagger)` for every half
/// time `t`. Static hyperfine shifts cancel; what remains decays on the echo
/// time T2 set by bath dynamics.
pub fn hahn_echo(state: &BathState, dynamics: &BathDynamics, half_times: &[f64]) -> Result<Vec<C64>> {
    half_times
        .iter()
        .map(|&t| {
            let u0 = dynamics.propagator(0, t)?;
            let u1 = dynamics.propagator(1, t)?;
            let a = mul(u1.as_ref(), u0.as_ref());
            let b = mul(u0.as_ref(), u1.as_ref());
            // Tr(A rho B^dagger) = Tr(B^dagger A rho), and rho is Hermitian
            let ba = mul(b.adjoint(), a.as_ref());
            Ok(trace_mul_adj(ba.as_ref(), state.rho.as_ref()))
        })
        .collect()
}

/// Total echo duration `2t` at which `|S_E|` falls below 1/e, to `rel_tol`.
/// Scans doubling half times from 1 us up to `max_total / 2`, then bisects;
/// `None` if the echo survives that long. Deep ESEEM modulation at low field
/// can trigger the scan early.
pub fn echo_decay_time(state: &BathState, dynamics: &BathDynamics, max_total: f64, rel_tol: f64) -> Result<Option<f64>> {
    let threshold = (-1.0f64).exp();
    let below = |t: f64| -> Result<bool> { Ok(hahn_echo(state, dynamics, &[t])?[0].norm() < threshold) };
    let mut lo = 0.0;
    let mut hi = 1e-6;
    loop {
        if 2.0 * hi > max_total {
            return Ok(None);
        }
        if below(hi)? {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(lo + hi))
}

/// Population `s(tau) = (1 - Re S_R)/2` of |0> after an
/// `R_x(pi/2) - U(tau) - R_x(pi/2)` sequence.
pub fn ramsey_population(signal: &[C64]) -> Vec<f64> {
    signal.iter().map(|s| 0.5 * (1.0 - s.re)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct T2Fit {
    /// Seconds.
    pub t2: f64,
    /// RMS deviation of the upper envelope from the fitted Gaussian.
    pub residual: f64,
}

pub const MIN_FIT_SAMPLES: usize = 8;

/// Fits `exp[-(tau/T2*)^2]` to the upper envelope of `|S_R|`.
///
/// Envelope points are samples that no later sample exceeds. When the
/// signal beats, only the local maxima among them are fitted, so the flanks
/// between beats do not drag the fit down. Late revivals lift the tail of the
/// envelope and show up in the residual rather than in `t2`.
pub fn fit_t2(magnitude: &[f64], taus: &[f64]) -> Result<T2Fit> {
    if magnitude.len() != taus.len() {
        return Err(Error::InvalidArgument("signal and grid lengths differ".into()));
    }
    if taus.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            need: MIN_FIT_SAMPLES,
            got: taus.len(),
        });
    }
    if taus.windows(2).any(|w| !(w[1] > w[0])) || taus[0] < 0.0 {
        return Err(Error::InvalidArgument("tau grid must be increasing and nonnegative".into()));
    }
    let n = magnitude.len();
    let mut suffix_max = magnitude.to_vec();
    for i in (0..n - 1).rev() {
        suffix_max[i] = suffix_max[i].max(suffix_max[i + 1]);
    }
    let last = suffix_max[n - 1];
    if last > (-1.0f64).exp() {
        return Err(Error::NonDecaying(last));
    }
    let on_envelope: Vec<usize> = (0..n).filter(|&i| magnitude[i] >= suffix_max[i]).collect();
    let peaks: Vec<usize> = on_envelope
        .iter()
        .cloned()
        .filter(|&i| i == 0 || (i + 1 < n && magnitude[i] > magnitude[i - 1] && magnitude[i] >= magnitude[i + 1]))
        .collect();
    let keep = if peaks.len() >= 4 { peaks } else { on_envelope };
    let envelope: Vec<f64> = keep.iter().map(|&i| magnitude[i]).collect();
    let taus_kept: Vec<f64> = keep.iter().map(|&i| taus[i]).collect();
    let taus = taus_kept.as_slice();
    let cost = |t2: f64| -> f64 {
        envelope
            .iter()
            .zip(taus)
            .map(|(y, tau)| {
                let r = y - (-(tau / t2).powi(2)).exp();
                r * r
            })
            .sum()
    };
    let t_max = *taus.last().unwrap();
    let t_min = taus.iter().cloned().find(|t| *t > 0.0).unwrap_or(t_max);
    // coarse log scan, then golden-section refinement in log space
    let (lo, hi) = ((t_min / 10.0).ln(), (t_max * 10.0).ln());
    let n_scan = 400;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=n_scan {
        let x = lo + (hi - lo) * i as f64 / n_scan as f64;
        let c = cost(x.exp());
        if c < best.0 {
            best = (c, x);
        }
    }
    let step = (hi - lo) / n_scan as f64;
    let (mut a, mut b) = (best.1 - step, best.1 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..100 {
        if cost(c.exp()) < cost(d.exp()) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let t2 = ((a + b) / 2.0).exp();
    Ok(T2Fit {
        t2,
        residual: (cost(t2) / envelope.len() as f64).sqrt(),
    })
}

/// Uniform grid `[0, span]` with `n` points.
pub fn linear_grid(span: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| span * i as f64 / (n - 1) as f64).collect()
}

/// Grid long enough to resolve the decay of a distribution with width
/// `sigma` (Hz): four times the Gaussian T2*.
pub fn grid_for_width(sigma: f64, n: usize) -> Vec<f64> {
    let t2 = 1.0 / (2f64.sqrt() * PI * sigma);
    linear_grid(4.0 * t2, n)
}
