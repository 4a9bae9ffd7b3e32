// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::bayes::Prior;
use crate::error::{Error, Result};

/// Where the conditional pi/2 phase increment is applied when an outcome
/// differs from its predecessor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseRule {
    /// Measure with the optimal phase, then hand the shifted phase to the
    /// Bayesian update.
    LiteralPseudocode,
    /// Shift the phase of the following measurement; updates always use the
    /// phase actually measured with.
    NextMeasurement,
}

/// How the base detection phase is chosen before any outcome-flip shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseBase {
    /// `arg(p_{-2^k}) / 2`.
    HalfArg,
    /// Minimises the outcome-averaged Holevo variance after the update.
    MinHolevo,
}

/// Coherence time assumed by the likelihood during updates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "seconds")]
pub enum T2Model {
    /// `1 / (sqrt 2 pi sigma)` from the current belief width.
    Belief,
    Fixed(f64),
    /// Full fringe contrast.
    Infinite,
}

/// What `n_steps` counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepUnit {
    /// Single Ramsey measurements.
    Measurement,
    /// Sensing-time selections, each followed by `G + k F` measurements.
    Sequence,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PriorConfig {
    Uniform,
    /// Gaussian centred at `center` (Hz); `width` in units of `1/tau0`.
    Gaussian { center: f64, width_over_tau0: f64 },
}

impl PriorConfig {
    pub fn resolve(&self, tau0: f64) -> Prior {
        match *self {
            PriorConfig::Uniform => Prior::Uniform,
            PriorConfig::Gaussian { center, width_over_tau0 } => Prior::Gaussian {
                center,
                width: width_over_tau0 / tau0,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolConfig {
    /// Shortest sensing time, seconds.
    pub tau0: f64,
    /// Repetitions at k = 0.
    pub g: u32,
    /// Extra repetitions per unit k.
    pub f: u32,
    /// Offset added inside the floor of the sensing-time rule.
    pub c: f64,
    /// Protocol length in units of `step_unit`.
    pub n_steps: usize,
    pub step_unit: StepUnit,
    /// Largest sensing-time exponent; derived from the bath when absent.
    pub k_max: Option<u32>,
    /// Fourier coefficient budget; derived from `n_steps` and `k_max` when absent.
    pub j_max: Option<usize>,
    pub phase_base: PhaseBase,
    pub phase_rule: PhaseRule,
    pub t2_model: T2Model,
    pub prior: PriorConfig,
    /// Stop narrowing once the true narrowing factor reaches this value.
    pub nf_cap: Option<f64>,
    /// Dead time charged per Ramsey shot on top of tau, seconds.
    pub overhead_per_shot: f64,
    /// Peak-detection kernel width as a fraction of the initial sigma_z.
    pub peak_bandwidth: f64,
    pub seed: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            tau0: 1e-6,
            g: 3,
            f: 2,
            c: -2.0,
            n_steps: 20,
            step_unit: StepUnit::Measurement,
            k_max: None,
            j_max: None,
            phase_base: PhaseBase::MinHolevo,
            phase_rule: PhaseRule::NextMeasurement,
            t2_model: T2Model::Infinite,
            prior: PriorConfig::Gaussian {
                center: 0.0,
                width_over_tau0: 1.0,
            },
            nf_cap: None,
            overhead_per_shot: 0.0,
            peak_bandwidth: 0.15,
            seed: 0,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau0 > 0.0) {
            return Err(Error::InvalidArgument(format!("tau0 must be positive, got {}", self.tau0)));
        }
        if self.g < 1 {
            return Err(Error::InvalidArgument("G must be at least 1".into()));
        }
        if !(self.overhead_per_shot >= 0.0) {
            return Err(Error::InvalidArgument("overhead_per_shot must be nonnegative".into()));
        }
        if !(self.peak_bandwidth > 0.0) {
            return Err(Error::InvalidArgument("peak_bandwidth must be positive".into()));
        }
        if let T2Model::Fixed(t) = self.t2_model {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!("fixed T2 must be positive, got {t}")));
            }
        }
        Ok(())
    }

    /// `M_k = G + k F`
    pub fn repetitions(&self, k: u32) -> u32 {
        self.g + k * self.f
    }
}
