// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix helpers on top of `faer`.
//!
//! All kernels run sequentially so that results are bit-identical no matter
//! how many worker threads the surrounding ensemble uses.

use std::f64::consts::PI;
use std::sync::Once;

use faer::linalg::matmul::matmul;
use faer::traits::Conjugate;
use faer::{Accum, Mat, MatRef, Par, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Mat<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// A 2x2 single-site operator, row-major.
pub type Op2 = [[C64; 2]; 2];

/// Spin-1/2 operators I_x, I_y, I_z (Pauli matrices over two).
pub const SPIN_HALF: [Op2; 3] = [
    [[ZERO, C64::new(0.5, 0.0)], [C64::new(0.5, 0.0), ZERO]],
    [[ZERO, C64::new(0.0, -0.5)], [C64::new(0.0, 0.5), ZERO]],
    [[C64::new(0.5, 0.0), ZERO], [ZERO, C64::new(-0.5, 0.0)]],
];

static SEQUENTIAL: Once = Once::new();

fn force_sequential() {
    SEQUENTIAL.call_once(|| faer::set_global_parallelism(Par::Seq));
}

/// `a * b`; either side may be a conjugated view such as `m.adjoint()`.
pub fn mul<L, R>(a: MatRef<'_, L>, b: MatRef<'_, R>) -> CMat
where
    L: Conjugate<Canonical = C64>,
    R: Conjugate<Canonical = C64>,
{
    let mut out = Mat::zeros(a.nrows(), b.ncols());
    matmul(&mut out, Accum::Replace, a, b, ONE, Par::Seq);
    out
}

/// `a * b^dagger`
pub fn mul_adj(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> CMat {
    mul(a, b.adjoint())
}

/// `a * rho * a^dagger`
pub fn sandwich(a: MatRef<'_, C64>, rho: MatRef<'_, C64>) -> CMat {
    mul_adj(mul(a, rho).as_ref(), a)
}

/// `Tr(a * b^dagger)` without forming the product.
pub fn trace_mul_adj(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> C64 {
    let mut acc = ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)] * b[(i, j)].conj();
        }
    }
    acc
}

pub fn trace(a: MatRef<'_, C64>) -> C64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

pub fn frobenius(a: MatRef<'_, C64>) -> f64 {
    a.norm_l2()
}

pub fn scaled(a: MatRef<'_, C64>, s: C64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

/// `alpha * a + beta * b`
pub fn lin_comb(alpha: C64, a: MatRef<'_, C64>, beta: C64, b: MatRef<'_, C64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| alpha * a[(i, j)] + beta * b[(i, j)])
}

pub fn kron(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> CMat {
    a.kron(b)
}

/// Relative Frobenius deviation from Hermiticity, `|A - A^dagger| / |A|`.
pub fn hermitian_deviation(a: MatRef<'_, C64>) -> f64 {
    let norm = frobenius(a);
    if norm == 0.0 {
        return 0.0;
    }
    let diff = Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - a[(j, i)].conj());
    frobenius(diff.as_ref()) / norm
}

/// Forces exact Hermiticity by averaging with the adjoint.
pub fn hermitize(a: &mut CMat) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
}

/// Index of the bit carrying spin `site` in an `n`-spin product basis
/// (spin 0 is the most significant bit).
#[inline]
pub fn site_bit(site: usize, n: usize) -> usize {
    n - 1 - site
}

/// Adds `coef * O_site` to `h`, where `O_site` acts as `op` on one spin.
pub fn add_one_site(h: &mut CMat, n: usize, site: usize, op: &Op2, coef: f64) {
    let shift = site_bit(site, n);
    let dim = 1usize << n;
    for col in 0..dim {
        let b = (col >> shift) & 1;
        for x in 0..2 {
            let v = op[x][b];
            if v == ZERO {
                continue;
            }
            let row = (col & !(1 << shift)) | (x << shift);
            h[(row, col)] += v * coef;
        }
    }
}

/// Adds `coef * A_i B_j` to `h`.
pub fn add_two_site(h: &mut CMat, n: usize, (i, op_i): (usize, &Op2), (j, op_j): (usize, &Op2), coef: f64) {
    debug_assert_ne!(i, j);
    let si = site_bit(i, n);
    let sj = site_bit(j, n);
    let dim = 1usize << n;
    for col in 0..dim {
        let bi = (col >> si) & 1;
        let bj = (col >> sj) & 1;
        for x in 0..2 {
            let vi = op_i[x][bi];
            if vi == ZERO {
                continue;
            }
            for y in 0..2 {
                let vj = op_j[y][bj];
                if vj == ZERO {
                    continue;
                }
                let row = (col & !(1 << si) & !(1 << sj)) | (x << si) | (y << sj);
                h[(row, col)] += vi * vj * coef;
            }
        }
    }
}

/// Eigensystem of a Hermitian generator in Hz.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn new(h: MatRef<'_, C64>) -> Result<Self> {
        let dev = hermitian_deviation(h);
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        force_sequential();
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = evd.S().column_vector();
        let values = (0..h.nrows()).map(|i| s[i].re).collect();
        Ok(Self {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(-i 2 pi H t)`
    pub fn evolution(&self, t: f64) -> CMat {
        if t == 0.0 {
            return Mat::identity(self.vectors.nrows(), self.vectors.ncols());
        }
        let v = self.vectors.as_ref();
        let phases: Vec<C64> = self
            .values
            .iter()
            .map(|&e| C64::from_polar(1.0, -2.0 * PI * e * t))
            .collect();
        let scaled_cols = Mat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * phases[j]);
        mul_adj(scaled_cols.as_ref(), v)
    }
}
