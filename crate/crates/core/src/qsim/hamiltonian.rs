// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use faer::Mat;
use nalgebra::{Matrix3, Vector3};

use crate::bathgen::{secular_correction, BathSpec};
use crate::error::{Error, Result};
use crate::linalg::{add_one_site, add_two_site, hermitian_deviation, CMat, HermitianEigen, SPIN_HALF};

pub const DEFAULT_MAX_SPINS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianOptions {
    /// Add the second-order transverse-hyperfine correction to every
    /// coupled pair.
    pub secular_correction: bool,
    pub max_spins: usize,
}

impl Default for HamiltonianOptions {
    fn default() -> Self {
        Self {
            secular_correction: true,
            max_spins: DEFAULT_MAX_SPINS,
        }
    }
}

/// Bath Hamiltonians conditioned on the electron projection, in Hz.
#[derive(Clone, Debug)]
pub struct ConditionalHamiltonians {
    pub n_spins: usize,
    /// `[H_0, H_1]`
    pub h: [CMat; 2],
}

impl ConditionalHamiltonians {
    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn get(&self, mu: u8) -> &CMat {
        &self.h[mu as usize]
    }
}

fn add_vector_term(h: &mut CMat, n: usize, site: usize, omega: &Vector3<f64>) {
    for (axis, op) in SPIN_HALF.iter().enumerate() {
        if omega[axis] != 0.0 {
            add_one_site(h, n, site, op, omega[axis]);
        }
    }
}

fn add_tensor_term(h: &mut CMat, n: usize, i: usize, j: usize, c: &Matrix3<f64>) {
    for a in 0..3 {
        for b in 0..3 {
            if c[(a, b)] != 0.0 {
                add_two_site(h, n, (i, &SPIN_HALF[a]), (j, &SPIN_HALF[b]), c[(a, b)]);
            }
        }
    }
}

/// `H_mu = sum_n (gamma_n B + mu A_n) . I_n + sum_{n<m} I_n . C^(mu)_nm . I_m`.
///
/// Spin pairs without an entry in `bath.couplings` are treated as decoupled,
/// including for the secular correction.
pub fn build_hamiltonians(bath: &BathSpec, opts: &HamiltonianOptions) -> Result<ConditionalHamiltonians> {
    bath.validate()?;
    let n = bath.n_spins();
    if n > opts.max_spins {
        return Err(Error::DimensionOverflow { n, max: opts.max_spins });
    }
    let dim = 1usize << n;
    let larmor = bath.field * bath.constants.gamma_n;
    let build = |mu: u8| {
        let mut h = Mat::zeros(dim, dim);
        for site in 0..n {
            let omega = larmor + bath.hyperfine_vectors[site] * f64::from(mu);
            add_vector_term(&mut h, n, site, &omega);
        }
        for c in &bath.couplings {
            let mut tensor = c.tensor;
            if opts.secular_correction {
                tensor += secular_correction(
                    &bath.hyperfine_tensors[c.i],
                    &bath.hyperfine_tensors[c.j],
                    mu,
                    &bath.constants,
                );
            }
            add_tensor_term(&mut h, n, c.i, c.j, &tensor);
        }
        h
    };
    let h = [build(0), build(1)];
    for m in &h {
        let dev = hermitian_deviation(m.as_ref());
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
    }
    Ok(ConditionalHamiltonians { n_spins: n, h })
}

/// `exp(-i 2 pi H tau)` for a Hermitian `H` in Hz.
pub fn propagator(h: &CMat, tau: f64) -> Result<CMat> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative evolution time {tau}")));
    }
    Ok(HermitianEigen::new(h.as_ref())?.evolution(tau))
}

const CACHE_LIMIT: usize = 64;

/// Conditional Hamiltonians with their eigensystems and a cache of the
/// `(U_0(tau), U_1(tau))` pairs already requested.
#[derive(Clone, Debug)]
pub struct BathDynamics {
    pub hamiltonians: ConditionalHamiltonians,
    pub(crate) eig: [HermitianEigen; 2],
    cache: HashMap<u64, [CMat; 2]>,
    /// Eigen-check every posterior for positivity; costly beyond ~8 spins.
    pub check_positivity: bool,
}

impl BathDynamics {
    pub fn new(hamiltonians: ConditionalHamiltonians) -> Result<Self> {
        let eig = [
            HermitianEigen::new(hamiltonians.h[0].as_ref())?,
            HermitianEigen::new(hamiltonians.h[1].as_ref())?,
        ];
        let check_positivity = hamiltonians.n_spins <= 8;
        Ok(Self {
            hamiltonians,
            eig,
            cache: HashMap::new(),
            check_positivity,
        })
    }

    pub fn from_bath(bath: &BathSpec, opts: &HamiltonianOptions) -> Result<Self> {
        Self::new(build_hamiltonians(bath, opts)?)
    }

    pub fn n_spins(&self) -> usize {
        self.hamiltonians.n_spins
    }

    pub fn dim(&self) -> usize {
        self.hamiltonians.dim()
    }

    pub fn eigen(&self, mu: u8) -> &HermitianEigen {
        &self.eig[mu as usize]
    }

    /// Single conditional propagator, uncached.
    pub fn propagator(&self, mu: u8, tau: f64) -> Result<CMat> {
        if !(tau >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative evolution time {tau}")));
        }
        Ok(self.eig[mu as usize].evolution(tau))
    }

    /// `[U_0(tau), U_1(tau)]`, cached by the bit pattern of `tau`.
    pub fn propagators(&mut self, tau: f64) -> Result<&[CMat; 2]> {
        if !(tau >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative evolution time {tau}")));
        }
        let key = tau.to_bits();
        if !self.cache.contains_key(&key) {
            if self.cache.len() >= CACHE_LIMIT {
                self.cache.clear();
            }
            let pair = [self.eig[0].evolution(tau), self.eig[1].evolution(tau)];
            self.cache.insert(key, pair);
        }
        Ok(&self.cache[&key])
    }
}
