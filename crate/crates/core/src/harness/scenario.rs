// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bathgen::{BathParams, BathSpec, PhysicalConstants};
use crate::controller::{ProtocolConfig, RefocusOptions, Segment};
use crate::error::{Error, Result};
use crate::qsim::{HamiltonianOptions, DEFAULT_MAX_SPINS};

/// One experiment: where baths come from, which protocol runs on them, and
/// how many seeded repetitions to make. Loaded from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "one")]
    pub ensemble: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Field values along z, tesla. `run` and `refocus` use the first one,
    /// `sweep-field` all of them.
    #[serde(default = "default_fields")]
    pub fields: Vec<f64>,
    #[serde(default)]
    pub mode: Mode,
    /// Number of leading runs that also write distribution and estimator
    /// snapshots.
    #[serde(default = "one")]
    pub snapshots: usize,
    /// Relative to the scenario file unless absolute. The command line can
    /// override it.
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub bath: BathSource,
    #[serde(default)]
    pub protocol: ProtocolConfig,
    #[serde(default)]
    pub nonadaptive: NonadaptiveSettings,
    #[serde(default)]
    pub refocus: Option<RefocusSettings>,
}

fn one() -> usize {
    1
}

fn default_fields() -> Vec<f64> {
    vec![0.25]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Adaptive,
    Nonadaptive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum BathSource {
    Generate(GenerateSettings),
    /// A bath written by `generate-bath`. Its stored field is replaced by the
    /// scenario's.
    File(FileSettings),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSettings {
    pub path: PathBuf,
    #[serde(default = "yes")]
    pub secular_correction: bool,
    #[serde(default = "default_max_spins")]
    pub max_spins: usize,
}

fn yes() -> bool {
    true
}

fn default_max_spins() -> usize {
    DEFAULT_MAX_SPINS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateSettings {
    pub n_spins: usize,
    pub concentration: f64,
    pub exclusion_radius: f64,
    pub max_radius: f64,
    /// Geometry seed when every run shares one bath.
    pub seed: u64,
    /// Draw a fresh bath for every run from the master seed.
    pub per_run: bool,
    pub constants: PhysicalConstants,
    pub secular_correction: bool,
    pub max_spins: usize,
}

impl Default for GenerateSettings {
    fn default() -> Self {
        let p = BathParams::default();
        Self {
            n_spins: p.n_spins,
            concentration: p.concentration,
            exclusion_radius: p.exclusion_radius,
            max_radius: p.max_radius,
            seed: p.seed,
            per_run: false,
            constants: PhysicalConstants::default(),
            secular_correction: true,
            max_spins: DEFAULT_MAX_SPINS,
        }
    }
}

impl GenerateSettings {
    pub fn params(&self, seed: u64) -> BathParams {
        BathParams {
            n_spins: self.n_spins,
            concentration: self.concentration,
            exclusion_radius: self.exclusion_radius,
            max_radius: self.max_radius,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonadaptiveSettings {
    /// Seconds.
    pub tau: f64,
    pub phi: f64,
    pub steps: usize,
}

impl Default for NonadaptiveSettings {
    fn default() -> Self {
        Self {
            tau: 1e-6,
            phi: 0.0,
            steps: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefocusSettings {
    pub schedule: Vec<Segment>,
    #[serde(default)]
    pub options: RefocusOptions,
    /// Points per Ramsey-signal snapshot at segment boundaries.
    #[serde(default = "default_signal_points")]
    pub signal_points: usize,
}

fn default_signal_points() -> usize {
    400
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    /// Loads a scenario and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut s = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let BathSource::File(f) = &mut s.bath {
            if f.path.is_relative() {
                f.path = base.join(&f.path);
            }
        }
        if let Some(out) = &mut s.output {
            if out.is_relative() {
                *out = base.join(&*out);
            }
        }
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ensemble == 0 {
            return Err(Error::InvalidArgument("ensemble must be at least 1".into()));
        }
        if self.fields.is_empty() {
            return Err(Error::InvalidArgument("fields must not be empty".into()));
        }
        if let Some(b) = self.fields.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
            return Err(Error::InvalidArgument(format!("field values must be positive, got {b}")));
        }
        if let BathSource::Generate(g) = &self.bath {
            if g.n_spins == 0 {
                return Err(Error::InvalidArgument("bath needs at least one spin".into()));
            }
            if g.n_spins > g.max_spins {
                return Err(Error::DimensionOverflow {
                    n: g.n_spins,
                    max: g.max_spins,
                });
            }
        }
        let ns = &self.nonadaptive;
        if !(ns.tau >= 0.0) || !ns.phi.is_finite() {
            return Err(Error::InvalidArgument("nonadaptive tau must be nonnegative and phi finite".into()));
        }
        self.protocol.validate()
    }

    pub fn hamiltonian_options(&self) -> HamiltonianOptions {
        let (secular_correction, max_spins) = match &self.bath {
            BathSource::Generate(g) => (g.secular_correction, g.max_spins),
            BathSource::File(f) => (f.secular_correction, f.max_spins),
        };
        HamiltonianOptions {
            secular_correction,
            max_spins,
        }
    }

    /// Loads a file bath once; `None` for generated baths.
    pub fn load_bath_file(&self) -> Result<Option<BathSpec>> {
        match &self.bath {
            BathSource::File(f) => Ok(Some(BathSpec::load(&f.path)?)),
            BathSource::Generate(_) => Ok(None),
        }
    }
}
