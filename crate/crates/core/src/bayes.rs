// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical belief over the bath's hyperfine shift, kept as Fourier
//! coefficients of a distribution periodic in `A_z` with period `1/tau0`.
//!
//! The belief is `P(A_z) ∝ sum_j p_j exp(i 2 pi j A_z tau0)` with `p_0 = 1/(2 pi)`
//! (the series is a density over the phase `2 pi A_z tau0`). A Ramsey outcome
//! at `tau = 2^k tau0` multiplies the density by a raised cosine, which in
//! coefficient space is a three-term shift-and-add.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::C64;

pub const P0: f64 = 1.0 / (2.0 * PI);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prior {
    Uniform,
    /// Wrapped Gaussian; `center` and `width` in Hz.
    Gaussian { center: f64, width: f64 },
}

/// Outcome probability `P(mu | A_z)` of a Ramsey measurement with visibility
/// `exp[-(tau/t2)^2]`. `t2 = inf` means full contrast.
pub fn likelihood(mu: u8, a_z: f64, tau: f64, phi: f64, t2: f64) -> f64 {
    let vis = (-(tau / t2).powi(2)).exp();
    let p0 = 0.5 + 0.5 * vis * (2.0 * PI * a_z * tau + phi).cos();
    if mu == 0 {
        p0
    } else {
        1.0 - p0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierDistribution {
    /// `p_j` for `j = 0..=j_max`; negative indices are conjugates.
    coeffs: Vec<C64>,
    /// Base sensing time, seconds.
    pub tau0: f64,
    /// Coherence time assumed by the most recent update, seconds.
    pub t2_estimate: f64,
}

impl FourierDistribution {
    pub fn init_prior(prior: Prior, tau0: f64, j_max: usize) -> Result<Self> {
        if j_max < 1 {
            return Err(Error::InvalidArgument("J_max must be at least 1".into()));
        }
        if !(tau0 > 0.0) {
            return Err(Error::InvalidArgument(format!("tau0 must be positive, got {tau0}")));
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); j_max + 1];
        coeffs[0] = C64::new(P0, 0.0);
        if let Prior::Gaussian { center, width } = prior {
            if !(width > 0.0) {
                return Err(Error::InvalidArgument(format!("Gaussian prior width {width}")));
            }
            // characteristic function of the wrapped normal in the phase 2 pi A tau0
            let s = 2.0 * PI * width * tau0;
            let theta0 = 2.0 * PI * center * tau0;
            for (j, c) in coeffs.iter_mut().enumerate().skip(1) {
                let jf = j as f64;
                *c = C64::from_polar(P0 * (-0.5 * jf * jf * s * s).exp(), -jf * theta0);
            }
        }
        Ok(Self {
            coeffs,
            tau0,
            t2_estimate: f64::INFINITY,
        })
    }

    /// Builds a belief from nonnegative-index coefficients, rescaled so that
    /// `p_0 = 1/(2 pi)`.
    pub fn from_coefficients(nonneg: Vec<C64>, tau0: f64) -> Result<Self> {
        if nonneg.len() < 2 {
            return Err(Error::InvalidArgument("J_max must be at least 1".into()));
        }
        let p0 = nonneg[0].re;
        if !(p0 > 0.0) {
            return Err(Error::DegenerateNormalization);
        }
        let scale = P0 / p0;
        let mut coeffs: Vec<C64> = nonneg.into_iter().map(|c| c * scale).collect();
        coeffs[0] = C64::new(P0, 0.0);
        Ok(Self {
            coeffs,
            tau0,
            t2_estimate: f64::INFINITY,
        })
    }

    pub fn j_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `p_j` for any `j`; zero outside `[-J_max, J_max]`.
    pub fn coeff(&self, j: i64) -> C64 {
        let idx = j.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            Some(c) if j < 0 => c.conj(),
            Some(c) => *c,
            None => C64::new(0.0, 0.0),
        }
    }

    /// Bayesian update for outcome `mu` of a Ramsey measurement at
    /// `tau = 2^k tau0` with detection phase `phi`.
    pub fn update(&self, mu: u8, k: u32, phi: f64, t2_estimate: f64) -> Result<Self> {
        let shift = 1usize.checked_shl(k).filter(|s| *s <= self.j_max()).ok_or(Error::ShiftBudget {
            k,
            j_max: self.j_max(),
        })? as i64;
        let tau = self.tau0 * shift as f64;
        let vis = (-(tau / t2_estimate).powi(2)).exp();
        let alpha = f64::from(mu) * PI + phi;
        let up = C64::from_polar(0.25 * vis, alpha);
        let down = C64::from_polar(0.25 * vis, -alpha);
        let mut next: Vec<C64> = (0..=self.j_max() as i64)
            .map(|j| self.coeff(j) * 0.5 + up * self.coeff(j - shift) + down * self.coeff(j + shift))
            .collect();
        let p0 = next[0].re;
        if !(p0 > 0.0) || !p0.is_finite() {
            return Err(Error::DegenerateNormalization);
        }
        let scale = P0 / p0;
        next.iter_mut().for_each(|c| *c *= scale);
        next[0] = C64::new(P0, 0.0);
        Ok(Self {
            coeffs: next,
            tau0: self.tau0,
            t2_estimate,
        })
    }

    /// Convolves the belief with a Gaussian of standard deviation `width` Hz.
    pub fn broaden(&self, width: f64) -> Self {
        let a = 2.0 * (PI * width * self.tau0).powi(2);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * (-a * (j * j) as f64).exp())
            .collect();
        Self {
            coeffs,
            tau0: self.tau0,
            t2_estimate: self.t2_estimate,
        }
    }

    /// `V_H = ((2 pi |p_1|)^-2 - 1) / 2`; infinite for a uniform belief.
    pub fn holevo_variance(&self) -> f64 {
        let r = 2.0 * PI * self.coeff(1).norm();
        if r == 0.0 {
            return f64::INFINITY;
        }
        (0.5 * (r.powi(-2) - 1.0)).max(0.0)
    }

    /// Holevo variance after a measurement at `2^k tau0` with phase `phi`,
    /// averaged over both outcomes with their predictive probabilities.
    pub fn expected_holevo_variance(&self, k: u32, phi: f64, t2_estimate: f64) -> f64 {
        let n = 1i64 << k;
        let tau = self.tau0 * n as f64;
        let vis = (-(tau / t2_estimate).powi(2)).exp();
        let mut total = 0.0;
        for mu in 0..2u8 {
            let alpha = f64::from(mu) * PI + phi;
            let up = C64::from_polar(0.25 * vis, alpha);
            let down = C64::from_polar(0.25 * vis, -alpha);
            let q0 = (self.coeff(0) * 0.5 + up * self.coeff(-n) + down * self.coeff(n)).re;
            let q1 = self.coeff(1) * 0.5 + up * self.coeff(1 - n) + down * self.coeff(1 + n);
            let prob = 2.0 * PI * q0;
            if prob <= 0.0 {
                continue;
            }
            let v = if q1.norm() == 0.0 {
                f64::INFINITY
            } else {
                (0.5 * ((q0 / q1.norm()).powi(2) - 1.0)).max(0.0)
            };
            total += prob * v;
        }
        total
    }

    /// Width of the belief in Hz, `sqrt(V_H) / (2 pi tau0)`.
    pub fn sigma_hz(&self) -> f64 {
        self.holevo_variance().sqrt() / (2.0 * PI * self.tau0)
    }

    /// Gaussian-dephasing coherence time implied by the belief width,
    /// `1 / (sqrt 2 pi sigma)`.
    pub fn t2_from_belief(&self) -> f64 {
        1.0 / (2f64.sqrt() * PI * self.sigma_hz())
    }

    /// Circular mean `arg(p_-1) / (2 pi tau0)` in `[-1/(2 tau0), 1/(2 tau0))`.
    pub fn estimate_mean(&self) -> Result<f64> {
        let c = self.coeff(-1);
        if c.norm() == 0.0 {
            return Err(Error::UniformBelief("mean"));
        }
        let mut arg = c.arg();
        if arg >= PI {
            arg -= 2.0 * PI;
        }
        Ok(arg / (2.0 * PI * self.tau0))
    }

    /// Probability density in 1/Hz at each grid point (one period integrates
    /// to one).
    pub fn evaluate(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter()
            .map(|&a| {
                let theta = 2.0 * PI * a * self.tau0;
                let tail: f64 = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, c)| (*c * C64::from_polar(1.0, j as f64 * theta)).re)
                    .sum();
                2.0 * PI * self.tau0 * (self.coeffs[0].re + 2.0 * tail)
            })
            .collect()
    }

    /// `(j, p_j)` for `j = -J_max..=J_max`.
    pub fn coefficients(&self) -> Vec<(i64, C64)> {
        let j = self.j_max() as i64;
        (-j..=j).map(|i| (i, self.coeff(i))).collect()
    }
}
