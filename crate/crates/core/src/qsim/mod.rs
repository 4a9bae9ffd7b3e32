// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact density-matrix simulation of the nuclear bath seen by a central
//! electron spin.

mod channel;
mod cluster;
mod distribution;
mod hamiltonian;
mod signal;
mod state;

pub use channel::{free_evolve, outcome_probabilities, ramsey_kraus, ramsey_measure, ramsey_postselect, RamseyOutcome};
pub use cluster::cluster_counterexample;
pub use distribution::{
    hyperfine_distribution, hyperfine_eigenvalues, narrowing_factor, HyperfineDistribution, NarrowingFactor,
    PeakSummary, PEAK_THRESHOLD, SATURATION_MASS,
};
pub use hamiltonian::{
    build_hamiltonians, propagator, BathDynamics, ConditionalHamiltonians, HamiltonianOptions, DEFAULT_MAX_SPINS,
};
pub use signal::{
    echo_decay_time, fit_t2, grid_for_width, hahn_echo, linear_grid, ramsey_population, ramsey_signal, T2Fit, MIN_FIT_SAMPLES,
};
pub use state::{BathState, POSITIVITY_TOL};
