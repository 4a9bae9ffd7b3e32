// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use faer::Mat;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_deviation, hermitize, mul_adj, trace, CMat, HermitianEigen, C64};

/// Eigenvalues above `-POSITIVITY_TOL` are rounding noise and get clamped;
/// anything more negative is a bug.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Bath density matrix in the product Z basis, spin 0 the most significant
/// bit and bit value 0 meaning spin up.
#[derive(Clone, Debug)]
pub struct BathState {
    pub n_spins: usize,
    pub rho: CMat,
}

impl BathState {
    /// Maximally mixed (infinite-temperature) state.
    pub fn thermal(n_spins: usize) -> Self {
        let dim = 1usize << n_spins;
        let w = C64::new(1.0 / dim as f64, 0.0);
        Self {
            n_spins,
            rho: Mat::from_fn(dim, dim, |i, j| if i == j { w } else { C64::new(0.0, 0.0) }),
        }
    }

    /// Diagonal state with the given (normalized) populations.
    pub fn diagonal(n_spins: usize, populations: &[f64]) -> Result<Self> {
        let dim = 1usize << n_spins;
        if populations.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "expected {dim} populations, got {}",
                populations.len()
            )));
        }
        let total: f64 = populations.iter().sum();
        if !(total > 0.0) || populations.iter().any(|p| *p < 0.0) {
            return Err(Error::InvalidArgument("populations must be nonnegative with positive sum".into()));
        }
        Ok(Self {
            n_spins,
            rho: Mat::from_fn(dim, dim, |i, j| {
                if i == j {
                    C64::new(populations[i] / total, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        })
    }

    pub fn from_matrix(rho: CMat) -> Result<Self> {
        let dim = rho.nrows();
        if dim != rho.ncols() || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("{}x{} is not a bath dimension", dim, rho.ncols())));
        }
        let state = Self {
            n_spins: dim.trailing_zeros() as usize,
            rho,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        trace(self.rho.as_ref()).re
    }

    /// Populations of the product Z basis states.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.rho[(i, i)].re).collect()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut rho = self.rho.clone();
        hermitize(&mut rho);
        let eig = HermitianEigen::new(rho.as_ref())?;
        Ok(eig.values.iter().cloned().fold(f64::INFINITY, f64::min))
    }

    /// Hermiticity, unit trace and positivity within tolerance.
    pub fn validate(&self) -> Result<()> {
        let dev = hermitian_deviation(self.rho.as_ref());
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("density matrix trace {tr}")));
        }
        let min = self.min_eigenvalue()?;
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    /// Rescales to unit trace and restores exact Hermiticity.
    pub(crate) fn normalize(&mut self) -> Result<()> {
        hermitize(&mut self.rho);
        let tr = self.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::DegenerateNormalization);
        }
        let inv = C64::new(1.0 / tr, 0.0);
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                self.rho[(i, j)] *= inv;
            }
        }
        Ok(())
    }

    /// Clamps eigenvalues in `[-POSITIVITY_TOL, 0)` to zero and renormalizes.
    pub fn repair_positivity(&mut self) -> Result<()> {
        hermitize(&mut self.rho);
        let eig = HermitianEigen::new(self.rho.as_ref())?;
        let min = eig.values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        if min < 0.0 {
            let v = eig.vectors.as_ref();
            let scaled = Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * eig.values[j].max(0.0));
            self.rho = mul_adj(scaled.as_ref(), v);
            self.normalize()?;
        }
        Ok(())
    }
}
