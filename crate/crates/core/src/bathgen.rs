// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Random dilute ¹³C baths on the diamond lattice and their coupling tensors.
//!
//! All couplings are stored in Hz (energy / h) and all lengths in nm. The
//! central electron spin sits at the origin, which is itself a lattice site
//! (the vacancy) and is never occupied.

use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BATH_FORMAT: &str = "spinbath-bath/1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Electron gyromagnetic ratio, Hz/T.
    pub gamma_e: f64,
    /// Nuclear (¹³C) gyromagnetic ratio, Hz/T.
    pub gamma_n: f64,
    /// Zero-field splitting D, Hz.
    pub zero_field_splitting: f64,
    /// mu0 h / 4 pi in Hz nm^3 per (Hz/T)^2.
    pub dipolar_prefactor: f64,
    /// Cubic lattice constant, nm.
    pub lattice_constant: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            gamma_e: 2.802_495_1e10,
            gamma_n: 1.070_84e7,
            zero_field_splitting: 2.87e9,
            dipolar_prefactor: 6.626_070_15e-14,
            lattice_constant: 0.3567,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.gamma_e,
            self.gamma_n,
            self.zero_field_splitting,
            self.dipolar_prefactor,
            self.lattice_constant,
        ];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "physical constants must be finite and positive: {self:?}"
            )))
        }
    }
}

/// Dipolar coupling between nuclei `i < j`, as seen from `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCoupling {
    pub i: usize,
    pub j: usize,
    pub tensor: Matrix3<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BathSpec {
    pub positions: Vec<Vector3<f64>>,
    pub hyperfine_tensors: Vec<Matrix3<f64>>,
    /// Row z of each hyperfine tensor: (A^zx, A^zy, A^zz).
    pub hyperfine_vectors: Vec<Vector3<f64>>,
    /// One entry per unordered pair, `i < j`.
    pub couplings: Vec<PairCoupling>,
    /// External field, T.
    pub field: Vector3<f64>,
    pub constants: PhysicalConstants,
    pub rng_seed: u64,
    pub concentration: f64,
    pub exclusion_radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub n_spins: usize,
    /// ¹³C fraction per lattice site.
    pub concentration: f64,
    /// Sites closer than this (nm) are never occupied.
    pub exclusion_radius: f64,
    /// Candidate shell radius (nm).
    pub max_radius: f64,
    pub seed: u64,
}

impl Default for BathParams {
    fn default() -> Self {
        Self {
            n_spins: 7,
            concentration: 0.011,
            exclusion_radius: 0.5,
            max_radius: 4.0,
            seed: 1,
        }
    }
}

/// Point-dipole tensor `scale / r^3 * (I - 3 n n^T)` for separation `r`.
fn dipolar(separation: &Vector3<f64>, scale: f64) -> Matrix3<f64> {
    let r = separation.norm();
    let n = separation / r;
    (Matrix3::identity() - 3.0 * n * n.transpose()) * (scale / (r * r * r))
}

pub fn hyperfine_tensor(position: &Vector3<f64>, constants: &PhysicalConstants) -> Result<Matrix3<f64>> {
    if !(position.norm() > 0.0) {
        return Err(Error::InvalidArgument(
            "hyperfine tensor needs a nonzero position".into(),
        ));
    }
    Ok(dipolar(
        position,
        constants.dipolar_prefactor * constants.gamma_e * constants.gamma_n,
    ))
}

pub fn nuclear_coupling_tensor(
    pos_i: &Vector3<f64>,
    pos_j: &Vector3<f64>,
    constants: &PhysicalConstants,
) -> Result<Matrix3<f64>> {
    let sep = pos_j - pos_i;
    if !(sep.norm() > 0.0) {
        return Err(Error::InvalidArgument("coincident nuclear positions".into()));
    }
    Ok(dipolar(
        &sep,
        constants.dipolar_prefactor * constants.gamma_n * constants.gamma_n,
    ))
}

/// Second-order correction to the nuclear-nuclear coupling from the
/// transverse hyperfine rows, for electron projection `mu`.
///
/// With `dg_i = (2 - 3 mu) gamma_e / (D gamma_n) * T_i`, where `T_i` holds the
/// xx..xz and yx..yz rows of the hyperfine tensor and a zero third row,
/// `dC_ij = -D (gamma_n / gamma_e)^2 / (2 - 3 mu) * dg_i^T dg_j`.
pub fn secular_correction(
    hyperfine_i: &Matrix3<f64>,
    hyperfine_j: &Matrix3<f64>,
    mu: u8,
    constants: &PhysicalConstants,
) -> Matrix3<f64> {
    assert!(mu <= 1, "electron projection must be 0 or 1");
    let factor = 2.0 - 3.0 * f64::from(mu);
    let d = constants.zero_field_splitting;
    let ratio = constants.gamma_n / constants.gamma_e;
    let g_scale = factor / (d * ratio);
    let transverse = |a: &Matrix3<f64>| {
        let mut t = *a;
        t.row_mut(2).fill(0.0);
        t * g_scale
    };
    let dg_i = transverse(hyperfine_i);
    let dg_j = transverse(hyperfine_j);
    dg_i.transpose() * dg_j * (-d * ratio * ratio / factor)
}

/// Diamond sites (in units of a/4) with `0 < r <= max_radius`, sorted by
/// distance and then lexicographically so the order is platform independent.
fn lattice_sites(lattice_constant: f64, min_radius: f64, max_radius: f64) -> Vec<[i64; 3]> {
    const BASIS: [[i64; 3]; 8] = [
        [0, 0, 0],
        [0, 2, 2],
        [2, 0, 2],
        [2, 2, 0],
        [1, 1, 1],
        [1, 3, 3],
        [3, 1, 3],
        [3, 3, 1],
    ];
    let quarter = lattice_constant / 4.0;
    let cells = (max_radius / lattice_constant).ceil() as i64 + 1;
    let max_r2 = (max_radius / quarter).powi(2);
    let min_r2 = (min_radius / quarter).powi(2);
    let mut sites = Vec::new();
    for cx in -cells..=cells {
        for cy in -cells..=cells {
            for cz in -cells..=cells {
                for b in &BASIS {
                    let p = [4 * cx + b[0], 4 * cy + b[1], 4 * cz + b[2]];
                    let r2 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) as f64;
                    if r2 > 0.0 && r2 <= max_r2 && r2 >= min_r2 {
                        sites.push(p);
                    }
                }
            }
        }
    }
    sites.sort_by_key(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2], *p));
    sites
}

/// Draws a bath of the `n_spins` occupied sites nearest the central spin.
///
/// Every candidate site undergoes an independent Bernoulli(concentration)
/// trial in distance order; the first `n_spins` successes form the bath.
pub fn sample_bath(params: &BathParams, constants: &PhysicalConstants) -> Result<BathSpec> {
    constants.validate()?;
    if params.n_spins == 0 {
        return Err(Error::InvalidArgument("n_spins must be at least 1".into()));
    }
    if !(params.concentration > 0.0 && params.concentration <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "concentration {} outside (0, 1]",
            params.concentration
        )));
    }
    if !(params.exclusion_radius >= 0.0) || !(params.max_radius > params.exclusion_radius) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= exclusion_radius < max_radius, got {} and {}",
            params.exclusion_radius, params.max_radius
        )));
    }
    let quarter = constants.lattice_constant / 4.0;
    let sites = lattice_sites(constants.lattice_constant, params.exclusion_radius, params.max_radius);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut chosen = Vec::with_capacity(params.n_spins);
    for site in &sites {
        let r = quarter * ((site[0] * site[0] + site[1] * site[1] + site[2] * site[2]) as f64).sqrt();
        if r <= params.exclusion_radius {
            continue;
        }
        if rng.random::<f64>() < params.concentration {
            chosen.push(Vector3::new(site[0] as f64, site[1] as f64, site[2] as f64) * quarter);
            if chosen.len() == params.n_spins {
                break;
            }
        }
    }
    if chosen.len() < params.n_spins {
        return Err(Error::InsufficientSites {
            radius: params.max_radius,
            found: chosen.len(),
            wanted: params.n_spins,
        });
    }
    let mut bath = BathSpec::from_positions(chosen, *constants)?;
    bath.rng_seed = params.seed;
    bath.concentration = params.concentration;
    bath.exclusion_radius = params.exclusion_radius;
    Ok(bath)
}

impl BathSpec {
    /// Builds all tensors for explicit positions; zero field, seed 0.
    pub fn from_positions(positions: Vec<Vector3<f64>>, constants: PhysicalConstants) -> Result<Self> {
        let hyperfine_tensors = positions
            .iter()
            .map(|p| hyperfine_tensor(p, &constants))
            .collect::<Result<Vec<_>>>()?;
        let mut couplings = Vec::new();
        for i in 0..positions.len() {
            for j in (i + 1)..positions.len() {
                couplings.push(PairCoupling {
                    i,
                    j,
                    tensor: nuclear_coupling_tensor(&positions[i], &positions[j], &constants)?,
                });
            }
        }
        Ok(Self::from_tensors(positions, hyperfine_tensors, couplings, constants))
    }

    pub fn from_tensors(
        positions: Vec<Vector3<f64>>,
        hyperfine_tensors: Vec<Matrix3<f64>>,
        couplings: Vec<PairCoupling>,
        constants: PhysicalConstants,
    ) -> Self {
        let hyperfine_vectors = hyperfine_tensors.iter().map(|a| a.row(2).transpose()).collect();
        Self {
            positions,
            hyperfine_tensors,
            hyperfine_vectors,
            couplings,
            field: Vector3::zeros(),
            constants,
            rng_seed: 0,
            concentration: 0.0,
            exclusion_radius: 0.0,
        }
    }

    pub fn n_spins(&self) -> usize {
        self.positions.len()
    }

    pub fn with_field(mut self, field: Vector3<f64>) -> Self {
        self.field = field;
        self
    }

    /// Field along the z (NV) axis, in tesla.
    pub fn with_field_z(self, b_z: f64) -> Self {
        self.with_field(Vector3::new(0.0, 0.0, b_z))
    }

    /// Coupling tensor between `i` and `j` oriented as `I_i . C . I_j`.
    pub fn coupling(&self, i: usize, j: usize) -> Option<Matrix3<f64>> {
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        self.couplings
            .iter()
            .find(|c| c.i == a && c.j == b)
            .map(|c| if flip { c.tensor.transpose() } else { c.tensor })
    }

    /// A^zz for each spin, Hz.
    pub fn hyperfine_zz(&self) -> Vec<f64> {
        self.hyperfine_vectors.iter().map(|v| v.z).collect()
    }

    /// Restriction to the listed spins, in the listed order.
    pub fn subset(&self, spins: &[usize]) -> BathSpec {
        let index_of = |s: usize| spins.iter().position(|&x| x == s);
        let mut couplings = Vec::new();
        for c in &self.couplings {
            if let (Some(a), Some(b)) = (index_of(c.i), index_of(c.j)) {
                let (i, j, tensor) = if a < b {
                    (a, b, c.tensor)
                } else {
                    (b, a, c.tensor.transpose())
                };
                couplings.push(PairCoupling { i, j, tensor });
            }
        }
        couplings.sort_by_key(|c| (c.i, c.j));
        BathSpec {
            positions: spins.iter().map(|&s| self.positions[s]).collect(),
            hyperfine_tensors: spins.iter().map(|&s| self.hyperfine_tensors[s]).collect(),
            hyperfine_vectors: spins.iter().map(|&s| self.hyperfine_vectors[s]).collect(),
            couplings,
            ..self.clone()
        }
    }

    /// Drops every coupling between spins in different groups of `partition`.
    pub fn without_intergroup_couplings(&self, partition: &[Vec<usize>]) -> BathSpec {
        let group = |s: usize| partition.iter().position(|g| g.contains(&s));
        let mut out = self.clone();
        out.couplings.retain(|c| group(c.i).is_some() && group(c.i) == group(c.j));
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        let n = self.n_spins();
        if n == 0 || self.hyperfine_tensors.len() != n || self.hyperfine_vectors.len() != n {
            return Err(Error::InvalidArgument("inconsistent bath dimensions".into()));
        }
        for (a, v) in self.hyperfine_tensors.iter().zip(&self.hyperfine_vectors) {
            if a.row(2).transpose() != *v {
                return Err(Error::InvalidArgument(
                    "hyperfine vector differs from tensor row z".into(),
                ));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.positions[i] == self.positions[j] {
                    return Err(Error::InvalidArgument(format!("spins {i} and {j} coincide")));
                }
            }
        }
        for c in &self.couplings {
            if c.i >= c.j || c.j >= n {
                return Err(Error::InvalidArgument(format!(
                    "coupling ({}, {}) is not an ordered in-range pair",
                    c.i, c.j
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&BathFile::from(self))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: BathFile = serde_json::from_str(text)?;
        if file.format != BATH_FORMAT {
            return Err(Error::FormatVersion {
                path: "<bath json>".into(),
                found: file.format,
                expected: BATH_FORMAT.into(),
            });
        }
        let bath = BathSpec::from(file);
        bath.validate()?;
        Ok(bath)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::FormatVersion { found, expected, .. } => Error::FormatVersion {
                path: path.into(),
                found,
                expected,
            },
            other => other,
        })
    }
}

type Rows3 = [[f64; 3]; 3];

fn rows(m: &Matrix3<f64>) -> Rows3 {
    [
        [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
        [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
        [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
    ]
}

fn from_rows(r: &Rows3) -> Matrix3<f64> {
    Matrix3::new(
        r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2],
    )
}

/// On-disk bath layout. Tensors are row-major `[[xx, xy, xz], [yx, ...], ...]`
/// in Hz, positions in nm, the field in T.
#[derive(Serialize, Deserialize)]
struct BathFile {
    format: String,
    rng_seed: u64,
    concentration: f64,
    exclusion_radius_nm: f64,
    field_t: [f64; 3],
    constants: PhysicalConstants,
    spins: Vec<SpinEntry>,
    couplings: Vec<CouplingEntry>,
}

#[derive(Serialize, Deserialize)]
struct SpinEntry {
    position_nm: [f64; 3],
    hyperfine_hz: Rows3,
}

#[derive(Serialize, Deserialize)]
struct CouplingEntry {
    i: usize,
    j: usize,
    tensor_hz: Rows3,
}

impl From<&BathSpec> for BathFile {
    fn from(b: &BathSpec) -> Self {
        BathFile {
            format: BATH_FORMAT.into(),
            rng_seed: b.rng_seed,
            concentration: b.concentration,
            exclusion_radius_nm: b.exclusion_radius,
            field_t: [b.field.x, b.field.y, b.field.z],
            constants: b.constants,
            spins: b
                .positions
                .iter()
                .zip(&b.hyperfine_tensors)
                .map(|(p, a)| SpinEntry {
                    position_nm: [p.x, p.y, p.z],
                    hyperfine_hz: rows(a),
                })
                .collect(),
            couplings: b
                .couplings
                .iter()
                .map(|c| CouplingEntry {
                    i: c.i,
                    j: c.j,
                    tensor_hz: rows(&c.tensor),
                })
                .collect(),
        }
    }
}

impl From<BathFile> for BathSpec {
    fn from(f: BathFile) -> Self {
        let positions = f.spins.iter().map(|s| Vector3::from(s.position_nm)).collect();
        let tensors = f.spins.iter().map(|s| from_rows(&s.hyperfine_hz)).collect();
        let couplings = f
            .couplings
            .iter()
            .map(|c| PairCoupling {
                i: c.i,
                j: c.j,
                tensor: from_rows(&c.tensor_hz),
            })
            .collect();
        let mut bath = BathSpec::from_tensors(positions, tensors, couplings, f.constants);
        bath.field = Vector3::from(f.field_t);
        bath.rng_seed = f.rng_seed;
        bath.concentration = f.concentration;
        bath.exclusion_radius = f.exclusion_radius_nm;
        bath
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Rotation3;
    use rand::Rng;

    fn c() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn on_axis_hyperfine_closed_form() {
        // mu0 h / 4pi * gamma_e gamma_n / r^3 evaluated by hand in SI units
        // then converted: 1e-7 * 6.62607015e-34 * 2.8024951e10 * 1.07084e7 / (1e-9)^3.
        let r = 1.0;
        let d = 1e-7 * 6.626_070_15e-34 * 2.802_495_1e10 * 1.070_84e7 / 1e-27;
        assert_relative_eq!(d, 19_885.0, max_relative = 1e-3);
        let a = hyperfine_tensor(&Vector3::new(0.0, 0.0, r), &c()).unwrap();
        let want = Matrix3::from_diagonal(&Vector3::new(d, d, -2.0 * d));
        assert_relative_eq!(a, want, max_relative = 1e-12);
    }

    #[test]
    fn hyperfine_rejects_origin() {
        assert!(hyperfine_tensor(&Vector3::zeros(), &c()).is_err());
        assert!(nuclear_coupling_tensor(&Vector3::x(), &Vector3::x(), &c()).is_err());
    }

    #[test]
    fn hyperfine_is_traceless_symmetric_and_rotates_covariantly() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let p = Vector3::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>())
                - Vector3::repeat(0.5)
                + Vector3::new(0.0, 0.0, 1.2);
            let axis = Vector3::new(rng.random::<f64>(), rng.random(), rng.random()) - Vector3::repeat(0.5);
            let rot = Rotation3::new(axis * 6.0).into_inner();
            let a = hyperfine_tensor(&p, &c()).unwrap();
            assert!(a.trace().abs() < 1e-9 * a.norm());
            assert_relative_eq!(a, a.transpose(), epsilon = 1e-9);
            let rotated = hyperfine_tensor(&(rot * p), &c()).unwrap();
            assert_relative_eq!(rotated, rot * a * rot.transpose(), epsilon = 1e-7 * a.norm());
        }
    }

    #[test]
    fn nuclear_coupling_closed_form_and_scaling() {
        let cz = 1e-7 * 6.626_070_15e-34 * 1.070_84e7 * 1.070_84e7 / 1e-27;
        let t = nuclear_coupling_tensor(&Vector3::zeros(), &Vector3::new(0.0, 0.0, 1.0), &c()).unwrap();
        assert_relative_eq!(t, Matrix3::from_diagonal(&Vector3::new(cz, cz, -2.0 * cz)), max_relative = 1e-12);

        let a = Vector3::new(0.1, -0.3, 0.2);
        let b = Vector3::new(0.4, 0.5, -0.6);
        let near = nuclear_coupling_tensor(&a, &b, &c()).unwrap();
        let far = nuclear_coupling_tensor(&(a * 2.0), &(b * 2.0), &c()).unwrap();
        assert_relative_eq!(near / 8.0, far, max_relative = 1e-12);
        assert_eq!(near, nuclear_coupling_tensor(&b, &a, &c()).unwrap());
    }

    #[test]
    fn secular_correction_cases() {
        let diag = Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, 5e4));
        assert_eq!(secular_correction(&diag, &diag, 0, &c()), Matrix3::zeros());

        let ai = hyperfine_tensor(&Vector3::new(0.3, 0.2, 0.5), &c()).unwrap();
        let aj = hyperfine_tensor(&Vector3::new(-0.4, 0.1, 0.6), &c()).unwrap();
        let c0 = secular_correction(&ai, &aj, 0, &c());
        let c1 = secular_correction(&ai, &aj, 1, &c());
        // Expanded by hand: dC = -(2 - 3 mu) / D * T_i^T T_j.
        let strip = |a: &Matrix3<f64>| {
            let mut t = *a;
            t.row_mut(2).fill(0.0);
            t
        };
        let expect0 = -(2.0 / c().zero_field_splitting) * strip(&ai).transpose() * strip(&aj);
        assert_relative_eq!(c0, expect0, max_relative = 1e-10);
        assert_relative_eq!(c1, c0 * -0.5, max_relative = 1e-10);
        assert_relative_eq!(c0.transpose(), secular_correction(&aj, &ai, 0, &c()), max_relative = 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_sorted() {
        let p = BathParams { n_spins: 7, seed: 42, ..Default::default() };
        let a = sample_bath(&p, &c()).unwrap();
        let b = sample_bath(&p, &c()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.n_spins(), 7);
        assert_eq!(a.couplings.len(), 21);
        let r: Vec<f64> = a.positions.iter().map(|p| p.norm()).collect();
        assert!(r.windows(2).all(|w| w[0] <= w[1]));
        assert!(r.iter().all(|&x| x > 0.5));
        for cp in &a.couplings {
            assert_relative_eq!(cp.tensor, cp.tensor.transpose(), epsilon = 1e-12);
        }
        let other = sample_bath(&BathParams { seed: 43, ..p }, &c()).unwrap();
        assert_ne!(a.positions, other.positions);
    }

    #[test]
    fn single_spin_has_no_couplings() {
        let b = sample_bath(&BathParams { n_spins: 1, seed: 3, ..Default::default() }, &c()).unwrap();
        assert!(b.couplings.is_empty());
    }

    #[test]
    fn insufficient_shell_is_reported() {
        let p = BathParams { n_spins: 50, max_radius: 1.0, ..Default::default() };
        assert!(matches!(sample_bath(&p, &c()), Err(Error::InsufficientSites { .. })));
    }

    #[test]
    fn lattice_has_diamond_coordination() {
        // nearest neighbours of a vacancy: 4 sites at sqrt(3)/4 a
        let sites = lattice_sites(1.0, 0.0, 0.45);
        assert_eq!(sites.len(), 4);
        let next = lattice_sites(1.0, 0.45, 0.71);
        assert_eq!(next.len(), 12);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let b = sample_bath(&BathParams { seed: 5, ..Default::default() }, &c())
            .unwrap()
            .with_field_z(0.25);
        let back = BathSpec::from_json(&b.to_json().unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn wrong_format_is_rejected() {
        let b = sample_bath(&BathParams::default(), &c()).unwrap();
        let text = b.to_json().unwrap().replace(BATH_FORMAT, "spinbath-bath/0");
        assert!(matches!(BathSpec::from_json(&text), Err(Error::FormatVersion { .. })));
    }

    #[test]
    fn subset_and_partition() {
        let b = sample_bath(&BathParams { n_spins: 4, seed: 2, ..Default::default() }, &c()).unwrap();
        let s = b.subset(&[3, 1]);
        assert_eq!(s.n_spins(), 2);
        assert_eq!(s.coupling(0, 1), b.coupling(3, 1));
        let cut = b.without_intergroup_couplings(&[vec![0, 1], vec![2, 3]]);
        assert_eq!(cut.couplings.len(), 2);
        assert!(cut.coupling(1, 2).is_none());
    }
}
