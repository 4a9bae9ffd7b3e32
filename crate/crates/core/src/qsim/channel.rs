// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! The Ramsey measurement as a two-outcome quantum channel on the bath.
//!
//! A Ramsey sequence with free time `tau` and detection phase `phi` acts on
//! the bath through the Kraus pair
//!
//! ```text
//! M_mu = (U_0(tau) + (-1)^mu e^{-i phi} U_1(tau)) / 2
//! ```
//!
//! so that `p(0) = (1 + Re[e^{i phi} S_R(tau)]) / 2` with
//! `S_R = Tr(U_0 rho U_1^dagger)`, matching the classical likelihood
//! `(1 + cos(2 pi A_z tau + phi)) / 2` for a bath in a definite A_z state.

use rand::Rng;

use crate::error::Result;
use crate::linalg::{lin_comb, mul, mul_adj, sandwich, trace_mul_adj, CMat, C64};
use crate::qsim::hamiltonian::BathDynamics;
use crate::qsim::state::BathState;

#[derive(Clone, Debug)]
pub struct RamseyOutcome {
    pub mu: u8,
    /// Probability of the realized outcome before the measurement.
    pub probability: f64,
    pub posterior: BathState,
}

/// `[M_0, M_1]` for free time `tau` and detection phase `phi`.
pub fn ramsey_kraus(dynamics: &mut BathDynamics, tau: f64, phi: f64) -> Result<[CMat; 2]> {
    let [u0, u1] = dynamics.propagators(tau)?;
    let half = C64::new(0.5, 0.0);
    let rot = C64::from_polar(0.5, -phi);
    Ok([
        lin_comb(half, u0.as_ref(), rot, u1.as_ref()),
        lin_comb(half, u0.as_ref(), -rot, u1.as_ref()),
    ])
}

/// `[p(0), p(1)]` without sampling.
pub fn outcome_probabilities(state: &BathState, dynamics: &mut BathDynamics, tau: f64, phi: f64) -> Result<[f64; 2]> {
    let kraus = ramsey_kraus(dynamics, tau, phi)?;
    let p = |m: &CMat| trace_mul_adj(mul(m.as_ref(), state.rho.as_ref()).as_ref(), m.as_ref()).re;
    Ok([p(&kraus[0]), p(&kraus[1])])
}

/// At `tau = 0` both Kraus operators are multiples of the identity, so the
/// state is left exactly as it was.
fn zero_time_probability(mu: u8, phi: f64) -> f64 {
    let c = phi.cos();
    0.5 * (1.0 + if mu == 0 { c } else { -c })
}

/// Samples a Ramsey outcome and applies its back-action.
pub fn ramsey_measure<R: Rng + ?Sized>(
    state: &BathState,
    dynamics: &mut BathDynamics,
    tau: f64,
    phi: f64,
    rng: &mut R,
) -> Result<RamseyOutcome> {
    if tau == 0.0 {
        let p0 = zero_time_probability(0, phi);
        let mu = if rng.random::<f64>() < p0 { 0u8 } else { 1u8 };
        return Ok(RamseyOutcome {
            mu,
            probability: zero_time_probability(mu, phi),
            posterior: state.clone(),
        });
    }
    let kraus = ramsey_kraus(dynamics, tau, phi)?;
    // p(1) follows from completeness, so only the realised branch needs M rho
    let m0_rho = mul(kraus[0].as_ref(), state.rho.as_ref());
    let p0 = trace_mul_adj(m0_rho.as_ref(), kraus[0].as_ref()).re.clamp(0.0, 1.0);
    let u: f64 = rng.random();
    let mu = if u < p0 { 0u8 } else { 1u8 };
    let m_rho = if mu == 0 {
        m0_rho
    } else {
        mul(kraus[1].as_ref(), state.rho.as_ref())
    };
    let mut posterior = BathState {
        n_spins: state.n_spins,
        rho: mul_adj(m_rho.as_ref(), kraus[mu as usize].as_ref()),
    };
    posterior.normalize()?;
    if dynamics.check_positivity {
        posterior.repair_positivity()?;
    }
    Ok(RamseyOutcome {
        mu,
        probability: if mu == 0 { p0 } else { 1.0 - p0 },
        posterior,
    })
}

/// Post-selects outcome `mu` (no sampling); `None` if it has zero weight.
pub fn ramsey_postselect(
    state: &BathState,
    dynamics: &mut BathDynamics,
    tau: f64,
    phi: f64,
    mu: u8,
) -> Result<Option<RamseyOutcome>> {
    if tau == 0.0 {
        let p = zero_time_probability(mu, phi);
        return Ok((p > 1e-15).then(|| RamseyOutcome { mu, probability: p, posterior: state.clone() }));
    }
    let kraus = ramsey_kraus(dynamics, tau, phi)?;
    let m = &kraus[mu as usize];
    let mut rho = sandwich(m.as_ref(), state.rho.as_ref());
    let p = crate::linalg::trace(rho.as_ref()).re;
    if !(p > 1e-15) {
        return Ok(None);
    }
    crate::linalg::hermitize(&mut rho);
    let mut posterior = BathState { n_spins: state.n_spins, rho };
    posterior.normalize()?;
    Ok(Some(RamseyOutcome { mu, probability: p, posterior }))
}

/// Free evolution with the electron parked in projection `idle_mu`.
pub fn free_evolve(state: &BathState, dynamics: &BathDynamics, duration: f64, idle_mu: u8) -> Result<BathState> {
    if duration == 0.0 {
        return Ok(state.clone());
    }
    let u = dynamics.propagator(idle_mu, duration)?;
    let mut out = BathState {
        n_spins: state.n_spins,
        rho: sandwich(u.as_ref(), state.rho.as_ref()),
    };
    out.normalize()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bathgen::{BathSpec, PhysicalConstants};
    use crate::linalg::frobenius;
    use crate::qsim::hamiltonian::HamiltonianOptions;
    use faer::Mat;
    use nalgebra::{Matrix3, Vector3};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dyn_for(bath: &BathSpec) -> BathDynamics {
        BathDynamics::from_bath(bath, &HamiltonianOptions::default()).unwrap()
    }

    fn small_bath() -> BathSpec {
        let positions = vec![
            Vector3::new(0.3, 0.2, 0.6),
            Vector3::new(-0.5, 0.4, 0.3),
            Vector3::new(0.2, -0.7, -0.4),
        ];
        BathSpec::from_positions(positions, PhysicalConstants::default())
            .unwrap()
            .with_field_z(0.05)
    }

    #[test]
    fn zero_time_is_identity_channel() {
        let mut d = dyn_for(&small_bath());
        let [m0, m1] = ramsey_kraus(&mut d, 0.0, 0.0).unwrap();
        assert!(frobenius((&m0 - &Mat::<C64>::identity(8, 8)).as_ref()) < 1e-14);
        assert!(frobenius(m1.as_ref()) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = BathState::diagonal(3, &[0.3, 0.1, 0.05, 0.05, 0.2, 0.1, 0.1, 0.1]).unwrap();
        for _ in 0..10 {
            let out = ramsey_measure(&s, &mut d, 0.0, 0.0, &mut rng).unwrap();
            assert_eq!(out.mu, 0);
            assert!(frobenius((&out.posterior.rho - &s.rho).as_ref()) < 1e-14);
        }
    }

    #[test]
    fn pi_phase_swaps_kraus_operators() {
        let mut d = dyn_for(&small_bath());
        let [a0, a1] = ramsey_kraus(&mut d, 7e-6, 0.4).unwrap();
        let [b0, b1] = ramsey_kraus(&mut d, 7e-6, 0.4 + std::f64::consts::PI).unwrap();
        assert!(frobenius((&a0 - &b1).as_ref()) < 1e-12);
        assert!(frobenius((&a1 - &b0).as_ref()) < 1e-12);
    }

    #[test]
    fn maximally_mixed_single_spin_matches_closed_form() {
        let a = Vector3::new(20e3, 8e3, 45e3);
        let mut t = Matrix3::zeros();
        t.set_row(2, &a.transpose());
        let bath = BathSpec::from_tensors(vec![Vector3::z()], vec![t], vec![], PhysicalConstants::default())
            .with_field_z(0.003);
        let mut d = dyn_for(&bath);
        let s = BathState::thermal(1);
        let larmor = Vector3::new(0.0, 0.0, 0.003 * bath.constants.gamma_n);
        let w0 = larmor.norm();
        let w1 = (larmor + a).norm();
        let n0 = larmor / w0;
        let n1 = (larmor + a) / w1;
        let pi = std::f64::consts::PI;
        for &(tau, phi) in &[(1e-6f64, 0.0f64), (3e-6, 0.7), (11e-6, -2.0), (40e-6, 3.0)] {
            let overlap = (pi * w0 * tau).cos() * (pi * w1 * tau).cos()
                + (pi * w0 * tau).sin() * (pi * w1 * tau).sin() * n0.dot(&n1);
            let want = 0.5 + 0.5 * phi.cos() * overlap;
            let p = outcome_probabilities(&s, &mut d, tau, phi).unwrap();
            assert!((p[0] - want).abs() < 1e-12, "tau {tau}: {} vs {want}", p[0]);
        }
    }

    #[test]
    fn repeated_outcome_on_projector_is_a_fixed_point() {
        // A Z-product state is an eigenvector of both U_0 and U_1 when the
        // field and hyperfine vectors are along z and couplings vanish.
        let mut t0 = Matrix3::zeros();
        t0[(2, 2)] = 30e3;
        let mut t1 = Matrix3::zeros();
        t1[(2, 2)] = -12e3;
        let bath = BathSpec::from_tensors(
            vec![Vector3::z(), Vector3::x()],
            vec![t0, t1],
            vec![],
            PhysicalConstants::default(),
        )
        .with_field_z(0.1);
        let mut d = dyn_for(&bath);
        let s = BathState::diagonal(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let once = ramsey_postselect(&s, &mut d, 9e-6, 0.3, 0).unwrap().unwrap();
        let twice = ramsey_postselect(&once.posterior, &mut d, 9e-6, 0.3, 0).unwrap().unwrap();
        assert!(frobenius((&once.posterior.rho - &twice.posterior.rho).as_ref()) < 1e-12);
        assert!(frobenius((&once.posterior.rho - &s.rho).as_ref()) < 1e-12);
    }

    #[test]
    fn free_evolution_preserves_thermal_state() {
        let d = dyn_for(&small_bath());
        let s = BathState::thermal(3);
        let out = free_evolve(&s, &d, 1e-3, 0).unwrap();
        assert!(frobenius((&out.rho - &s.rho).as_ref()) < 1e-14);
        let same = free_evolve(&s, &d, 0.0, 0).unwrap();
        assert_eq!(same.rho, s.rho);
    }
}
