// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation of adaptive Ramsey narrowing of a nuclear spin bath coupled to
//! a central electron spin.
//!
//! The crate is organised bottom-up:
//!
//! * [`bathgen`] samples 13C positions on a diamond lattice and derives the
//!   hyperfine and nuclear dipolar tensors.
//! * [`qsim`] builds the conditional bath Hamiltonians, applies the Ramsey
//!   measurement channel to the bath density matrix and analyses the
//!   resulting hyperfine distribution.
//! * [`bayes`] is the Fourier-series estimator of the hyperfine field.
//! * [`controller`] runs the adaptive loop and its baselines.
//! * [`harness`] holds scenario files, ensembles and the CSV/JSON outputs
//!   behind the `spinbath` binary.

pub mod bathgen;
pub mod bayes;
pub mod controller;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod qsim;

pub use error::{Error, Result};
