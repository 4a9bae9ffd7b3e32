// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Counterexample showing that a cluster factorization of the bath breaks
//! down under measurement back-action.
//!
//! Even with all intercluster couplings removed, so that `U_mu` factorizes
//! over clusters, the Kraus operator `U_0 + s U_1` does not: the joint
//! update mixes every cluster through the shared electron outcome. Updating
//! each cluster with its own Kraus operator and taking the Kronecker product
//! gives a different state.

use crate::bathgen::BathSpec;
use crate::error::{Error, Result};
use crate::linalg::{frobenius, kron, CMat};
use crate::qsim::channel::ramsey_postselect;
use crate::qsim::hamiltonian::{BathDynamics, HamiltonianOptions};
use crate::qsim::state::BathState;

fn thermal_postselected(bath: &BathSpec, opts: &HamiltonianOptions, tau: f64, phi: f64, mu: u8) -> Result<CMat> {
    let mut dynamics = BathDynamics::from_bath(bath, opts)?;
    let state = BathState::thermal(bath.n_spins());
    match ramsey_postselect(&state, &mut dynamics, tau, phi, mu)? {
        Some(out) => Ok(out.posterior.rho),
        None => Err(Error::DegenerateNormalization),
    }
}

/// Frobenius distance between the exact post-measurement bath state and the
/// Kronecker product of per-cluster updates, both starting from the thermal
/// state and post-selected on outcome `mu = 1`.
///
/// `partition` lists the spins of each cluster; every spin must appear once.
pub fn cluster_counterexample(
    bath: &BathSpec,
    partition: &[Vec<usize>],
    tau: f64,
    phi: f64,
    opts: &HamiltonianOptions,
) -> Result<f64> {
    let mut all: Vec<usize> = partition.iter().flatten().cloned().collect();
    all.sort_unstable();
    if all != (0..bath.n_spins()).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument("partition must cover every spin exactly once".into()));
    }
    if partition.iter().any(|c| c.is_empty()) {
        return Err(Error::InvalidArgument("empty cluster".into()));
    }
    // Order spins cluster by cluster so the joint basis is the Kronecker
    // product of the cluster bases.
    let order: Vec<usize> = partition.iter().flatten().cloned().collect();
    let relabel = |s: usize| order.iter().position(|&x| x == s).unwrap();
    let clusters: Vec<Vec<usize>> = partition.iter().map(|c| c.iter().map(|&s| relabel(s)).collect()).collect();
    let joint = bath.subset(&order).without_intergroup_couplings(&clusters);

    // mu = 1 is the branch where the two conditional evolutions interfere
    // destructively at tau = 0, so tau = 0 post-selection is empty; both
    // constructions then reduce to the untouched thermal state.
    let mu = if tau == 0.0 { 0 } else { 1 };
    let full = thermal_postselected(&joint, opts, tau, phi, mu)?;

    let mut product: Option<CMat> = None;
    for cluster in &clusters {
        let sub = joint.subset(cluster);
        let rho = thermal_postselected(&sub, opts, tau, phi, mu)?;
        product = Some(match product {
            None => rho,
            Some(acc) => kron(acc.as_ref(), rho.as_ref()),
        });
    }
    let product = product.expect("partition is non-empty");
    Ok(frobenius((&full - &product).as_ref()))
}
