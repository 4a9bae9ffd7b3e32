// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use crate::bathgen::BathSpec;
use crate::error::{Error, Result};
use crate::qsim::state::BathState;

/// A support point carrying at least this much probability counts as a
/// collapsed (discretization-limited) distribution.
pub const SATURATION_MASS: f64 = 0.99;

/// Peaks lower than this fraction of the tallest are ignored.
pub const PEAK_THRESHOLD: f64 = 0.05;

/// The bath's true distribution of the collective hyperfine shift
/// `A_z = sum_n s_n A_n^zz / 2`, one entry per product Z state.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperfineDistribution {
    /// Hz
    pub eigenvalues: Vec<f64>,
    pub probabilities: Vec<f64>,
}

/// `A_z` eigenvalue of every product basis state (spin 0 most significant,
/// bit 0 = spin up).
pub fn hyperfine_eigenvalues(bath: &BathSpec) -> Vec<f64> {
    let n = bath.n_spins();
    let azz = bath.hyperfine_zz();
    (0..1usize << n)
        .map(|b| {
            (0..n)
                .map(|site| {
                    let up = (b >> (n - 1 - site)) & 1 == 0;
                    if up {
                        azz[site] / 2.0
                    } else {
                        -azz[site] / 2.0
                    }
                })
                .sum()
        })
        .collect()
}

pub fn hyperfine_distribution(state: &BathState, bath: &BathSpec) -> Result<HyperfineDistribution> {
    if state.n_spins != bath.n_spins() {
        return Err(Error::InvalidArgument(format!(
            "state has {} spins, bath {}",
            state.n_spins,
            bath.n_spins()
        )));
    }
    let mut probabilities = state.populations();
    for p in probabilities.iter_mut() {
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let total: f64 = probabilities.iter().sum();
    probabilities.iter_mut().for_each(|p| *p /= total);
    Ok(HyperfineDistribution {
        eigenvalues: hyperfine_eigenvalues(bath),
        probabilities,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NarrowingFactor {
    /// `sigma_0 / sigma`; `+inf` once the distribution has no spread left.
    pub value: f64,
    /// Probability has collapsed onto a single support point.
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeakSummary {
    /// Local maxima of the smoothed density above `PEAK_THRESHOLD` of the max.
    pub n_peaks: usize,
    /// Hz
    pub main_peak: f64,
    /// Probability in the basin of the tallest peak.
    pub main_mass: f64,
}

impl PeakSummary {
    pub fn is_unimodal(&self, mass_fraction: f64) -> bool {
        self.main_mass >= mass_fraction
    }
}

impl HyperfineDistribution {
    pub fn mean(&self) -> f64 {
        self.eigenvalues.iter().zip(&self.probabilities).map(|(a, p)| a * p).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.probabilities)
            .map(|(a, p)| a * a * p)
            .sum()
    }

    /// Standard deviation, computed about the mean to avoid cancellation.
    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        self.eigenvalues
            .iter()
            .zip(&self.probabilities)
            .map(|(a, p)| (a - m) * (a - m) * p)
            .sum::<f64>()
            .sqrt()
    }

    /// Largest probability held by one distinct eigenvalue (values closer
    /// than 1 mHz merged).
    pub fn max_atom_mass(&self) -> f64 {
        let mut pts: Vec<(f64, f64)> = self
            .eigenvalues
            .iter()
            .cloned()
            .zip(self.probabilities.iter().cloned())
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = 0.0f64;
        let mut i = 0;
        while i < pts.len() {
            let mut mass = pts[i].1;
            let mut j = i + 1;
            while j < pts.len() && pts[j].0 - pts[i].0 < 1e-3 {
                mass += pts[j].1;
                j += 1;
            }
            best = best.max(mass);
            i = j;
        }
        best
    }

    /// Gaussian-kernel smoothing with `bandwidth` (Hz), then peak counting.
    pub fn peaks(&self, bandwidth: f64) -> PeakSummary {
        let lo = self.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min) - 4.0 * bandwidth;
        let hi = self.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 4.0 * bandwidth;
        let step = bandwidth / 4.0;
        let n = ((hi - lo) / step).ceil() as usize + 1;
        let grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        let density: Vec<f64> = grid
            .iter()
            .map(|&x| {
                self.eigenvalues
                    .iter()
                    .zip(&self.probabilities)
                    .map(|(a, p)| p * (-0.5 * ((x - a) / bandwidth).powi(2)).exp())
                    .sum()
            })
            .collect();
        let max = density.iter().cloned().fold(0.0, f64::max);
        let mut maxima = Vec::new();
        for i in 0..n {
            let left = if i == 0 { f64::NEG_INFINITY } else { density[i - 1] };
            let right = if i + 1 == n { f64::NEG_INFINITY } else { density[i + 1] };
            if density[i] > left && density[i] >= right && density[i] >= PEAK_THRESHOLD * max {
                maxima.push(i);
            }
        }
        let top = maxima
            .iter()
            .cloned()
            .max_by(|&a, &b| density[a].total_cmp(&density[b]))
            .unwrap_or(0);
        // basin: walk downhill from the tallest peak in both directions
        let mut l = top;
        while l > 0 && density[l - 1] <= density[l] {
            l -= 1;
        }
        let mut r = top;
        while r + 1 < n && density[r + 1] <= density[r] {
            r += 1;
        }
        let (x_lo, x_hi) = (grid[l], grid[r]);
        let main_mass = self
            .eigenvalues
            .iter()
            .zip(&self.probabilities)
            .filter(|(a, _)| **a >= x_lo && **a <= x_hi)
            .map(|(_, p)| p)
            .sum();
        PeakSummary {
            n_peaks: maxima.len(),
            main_peak: grid[top],
            main_mass,
        }
    }
}

pub fn narrowing_factor(current: &HyperfineDistribution, initial: &HyperfineDistribution) -> Result<NarrowingFactor> {
    let s0 = initial.std_dev();
    if !(s0 > 0.0) {
        return Err(Error::InvalidArgument("initial distribution has zero width".into()));
    }
    let s = current.std_dev();
    let saturated = current.max_atom_mass() >= SATURATION_MASS;
    Ok(NarrowingFactor {
        value: if s > 0.0 { s0 / s } else { f64::INFINITY },
        saturated: saturated || s == 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bathgen::PhysicalConstants;
    use nalgebra::{Matrix3, Vector3};

    fn zz_bath(values: &[f64]) -> BathSpec {
        let tensors = values
            .iter()
            .map(|&v| {
                let mut t = Matrix3::zeros();
                t[(2, 2)] = v;
                t
            })
            .collect();
        let positions = (0..values.len()).map(|i| Vector3::new(0.0, 0.0, 1.0 + i as f64)).collect();
        BathSpec::from_tensors(positions, tensors, vec![], PhysicalConstants::default())
    }

    #[test]
    fn thermal_state_gives_uniform_distribution() {
        let bath = zz_bath(&[10e3, 4e3, -7e3]);
        let d = hyperfine_distribution(&BathState::thermal(3), &bath).unwrap();
        assert!(d.probabilities.iter().all(|p| (p - 0.125).abs() < 1e-15));
        assert!((d.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(d.eigenvalues[0], (10e3 + 4e3 - 7e3) / 2.0);
        assert_eq!(d.eigenvalues[7], -(10e3 + 4e3 - 7e3) / 2.0);
    }

    #[test]
    fn single_spin_has_two_eigenvalues() {
        let bath = zz_bath(&[8e3]);
        assert_eq!(hyperfine_eigenvalues(&bath), vec![4e3, -4e3]);
    }

    #[test]
    fn narrowing_factor_cases() {
        let init = HyperfineDistribution {
            eigenvalues: vec![-2.0, 2.0],
            probabilities: vec![0.5, 0.5],
        };
        assert_eq!(narrowing_factor(&init, &init).unwrap().value, 1.0);
        let half = HyperfineDistribution {
            eigenvalues: vec![-1.0, 1.0],
            probabilities: vec![0.5, 0.5],
        };
        assert_eq!(narrowing_factor(&half, &init).unwrap().value, 2.0);
        let point = HyperfineDistribution {
            eigenvalues: vec![-1.0, 1.0],
            probabilities: vec![0.0, 1.0],
        };
        let nf = narrowing_factor(&point, &init).unwrap();
        assert!(nf.value.is_infinite() && nf.saturated);
        assert!(narrowing_factor(&init, &point).is_err());
    }

    #[test]
    fn peak_counting() {
        let two = HyperfineDistribution {
            eigenvalues: vec![-10.0, -9.5, 9.5, 10.0],
            probabilities: vec![0.25; 4],
        };
        let s = two.peaks(1.0);
        assert_eq!(s.n_peaks, 2);
        assert!((s.main_mass - 0.5).abs() < 1e-12);
        assert!(!s.is_unimodal(0.9));
        let one = HyperfineDistribution {
            eigenvalues: vec![-0.5, 0.0, 0.5, 30.0],
            probabilities: vec![0.3, 0.4, 0.28, 0.02],
        };
        let s = one.peaks(1.0);
        assert_eq!(s.n_peaks, 1);
        assert!(s.is_unimodal(0.9));
    }
}
