// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bathgen::BathSpec;
use crate::bayes::FourierDistribution;
use crate::controller::config::{PhaseBase, PhaseRule, ProtocolConfig, StepUnit, T2Model};
use crate::controller::select::{conditional_shift, min_holevo_phase, select_k, select_phase};
use crate::controller::trace::{ProtocolTrace, RunSummary, StepRecord};
use crate::error::{Error, Result};
use crate::qsim::{
    fit_t2, grid_for_width, hyperfine_distribution, hyperfine_eigenvalues, narrowing_factor, ramsey_measure,
    ramsey_signal, BathDynamics, BathState, HyperfineDistribution,
};

/// Largest k for which the sensing time stays below a quarter of the inverse
/// mean level spacing of the hyperfine spectrum.
pub fn auto_k_max(bath: &BathSpec, tau0: f64) -> u32 {
    const CEILING: u32 = 16;
    let eig = hyperfine_eigenvalues(bath);
    let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let levels = (eig.len() - 1).max(1) as f64;
    let gap = (hi - lo) / levels;
    if !(gap > 0.0) {
        return CEILING;
    }
    let k = (1.0 / (4.0 * gap * tau0)).log2().floor();
    k.clamp(0.0, f64::from(CEILING)) as u32
}

/// Fails when the hyperfine spectrum does not fit in one period of the
/// shortest sensing time.
pub fn check_aliasing(bath: &BathSpec, tau0: f64) -> Result<()> {
    let span = hyperfine_eigenvalues(bath).iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let limit = 0.5 / tau0;
    if span >= limit {
        return Err(Error::Aliasing { span, limit });
    }
    Ok(())
}

/// Fitted Ramsey T2* of `state`, or `None` when the signal does not decay
/// within 256 times the window implied by the width of `P(A_z)`.
///
/// A narrowed distribution often keeps a sharp core on broad tails, so the
/// window doubles until the envelope falls below 1/e.
pub fn state_t2(state: &BathState, dynamics: &BathDynamics, bath: &BathSpec) -> Result<Option<f64>> {
    const POINTS: usize = 300;
    const DOUBLINGS: u32 = 8;
    let sigma = hyperfine_distribution(state, bath)?.std_dev();
    if !(sigma > 0.0) {
        return Ok(None);
    }
    let base = grid_for_width(sigma, POINTS);
    for d in 0..=DOUBLINGS {
        let scale = f64::from(1u32 << d);
        let taus: Vec<f64> = base.iter().map(|t| t * scale).collect();
        let mag: Vec<f64> = ramsey_signal(state, dynamics, &taus).iter().map(|s| s.norm()).collect();
        match fit_t2(&mag, &taus) {
            Ok(fit) => return Ok(Some(fit.t2)),
            Err(Error::NonDecaying(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Upper bound on measurements for `steps` steps, used to size the
/// coefficient budget.
pub(crate) fn max_measurements(cfg: &ProtocolConfig, steps: usize) -> usize {
    match cfg.step_unit {
        StepUnit::Measurement => steps,
        StepUnit::Sequence => steps * cfg.repetitions(cfg.k_max.unwrap_or(16).min(16)) as usize,
    }
}

/// Resolved settings shared by every narrowing segment of a run.
#[derive(Clone, Debug)]
pub(crate) struct Resolved {
    pub k_max: u32,
    pub j_max: usize,
}

pub(crate) fn resolve(bath: &BathSpec, cfg: &ProtocolConfig, measurements: usize) -> Result<Resolved> {
    cfg.validate()?;
    check_aliasing(bath, cfg.tau0)?;
    let k_max = cfg.k_max.unwrap_or_else(|| auto_k_max(bath, cfg.tau0));
    let j_max = cfg.j_max.unwrap_or_else(|| (measurements.max(1) << k_max).max(2));
    if (1usize << k_max) > j_max {
        return Err(Error::ShiftBudget { k: k_max, j_max });
    }
    Ok(Resolved { k_max, j_max })
}

/// Mutable state of a narrowing run: bath, belief, clock and log.
pub(crate) struct Session<'a> {
    pub bath: &'a BathSpec,
    pub dynamics: &'a mut BathDynamics,
    pub cfg: &'a ProtocolConfig,
    pub k_max: u32,
    pub state: BathState,
    pub belief: FourierDistribution,
    pub baseline: HyperfineDistribution,
    pub rng: ChaCha8Rng,
    pub elapsed: f64,
    pub measurements: usize,
    pub sequences: usize,
    pub last_outcomes: [Option<u8>; 2],
    pub records: Vec<StepRecord>,
    pub bandwidth: f64,
    pub adaptive: bool,
}

impl<'a> Session<'a> {
    pub fn new(
        bath: &'a BathSpec,
        dynamics: &'a mut BathDynamics,
        state: BathState,
        cfg: &'a ProtocolConfig,
        resolved: &Resolved,
        adaptive: bool,
    ) -> Result<Self> {
        if dynamics.n_spins() != bath.n_spins() || state.n_spins != bath.n_spins() {
            return Err(Error::InvalidArgument("bath, dynamics and state sizes differ".into()));
        }
        let baseline = hyperfine_distribution(&state, bath)?;
        let bandwidth = cfg.peak_bandwidth * baseline.std_dev();
        let belief = FourierDistribution::init_prior(cfg.prior.resolve(cfg.tau0), cfg.tau0, resolved.j_max)?;
        let mut s = Self {
            bath,
            dynamics,
            cfg,
            k_max: resolved.k_max,
            state,
            belief,
            baseline,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            elapsed: 0.0,
            measurements: 0,
            sequences: 0,
            last_outcomes: [None, None],
            records: Vec::new(),
            bandwidth,
            adaptive,
        };
        s.record(None)?;
        Ok(s)
    }

    fn t2_for_update(&self) -> f64 {
        match self.cfg.t2_model {
            T2Model::Belief => self.belief.t2_from_belief(),
            T2Model::Fixed(t) => t,
            T2Model::Infinite => f64::INFINITY,
        }
    }

    pub fn capped(&self) -> bool {
        match (self.cfg.nf_cap, self.records.last()) {
            (Some(cap), Some(r)) => r.narrowing >= cap,
            _ => false,
        }
    }

    /// One Ramsey shot at sensing exponent `k` (free time `tau`), followed by
    /// a belief update in adaptive sessions.
    pub fn shot(&mut self, k: u32, tau: f64, fixed_phi: f64) -> Result<()> {
        let adaptive = self.adaptive;
        let [before_prev, prev] = self.last_outcomes;
        let (phi, fallback) = if adaptive {
            let (prev_pair, cur) = match self.cfg.phase_rule {
                PhaseRule::LiteralPseudocode => (None, None),
                PhaseRule::NextMeasurement => (before_prev, prev),
            };
            match self.cfg.phase_base {
                PhaseBase::HalfArg => {
                    let choice = select_phase(&self.belief, k, prev_pair, cur);
                    (choice.phi, choice.fallback)
                }
                PhaseBase::MinHolevo => {
                    let base = min_holevo_phase(&self.belief, k, self.t2_for_update());
                    (base + conditional_shift(prev_pair, cur), false)
                }
            }
        } else {
            (fixed_phi, false)
        };
        let out = ramsey_measure(&self.state, self.dynamics, tau, phi, &mut self.rng)?;
        self.state = out.posterior;
        self.elapsed += tau + self.cfg.overhead_per_shot;
        self.measurements += 1;
        let phi_update = match self.cfg.phase_rule {
            PhaseRule::LiteralPseudocode if adaptive => phi + conditional_shift(prev, Some(out.mu)),
            _ => phi,
        };
        if adaptive {
            let t2 = self.t2_for_update();
            self.belief = self.belief.update(out.mu, k, phi_update, t2)?;
        }
        self.last_outcomes = [prev, Some(out.mu)];
        self.record(
            Some(Shot {
                k,
                tau,
                phi,
                phi_update,
                outcome: out.mu,
                outcome_probability: out.probability,
                fallback,
            }),
        )
    }

    /// Adaptive narrowing until `budget` steps, `duration` seconds of
    /// sensing or the NF cap, whichever comes first.
    pub fn narrow(&mut self, budget: usize, duration: Option<f64>) -> Result<()> {
        let start = (self.measurements, self.sequences);
        let start_t = self.elapsed;
        let unit = self.cfg.step_unit;
        let over_time = |s: &Self| duration.is_some_and(|d| s.elapsed - start_t >= d) || s.capped();
        let over_budget = |s: &Self| match unit {
            StepUnit::Measurement => s.measurements - start.0 >= budget,
            StepUnit::Sequence => s.sequences - start.1 >= budget,
        };
        while !over_budget(self) && !over_time(self) {
            let k = select_k(&self.belief, self.cfg.c, self.k_max);
            for _ in 0..self.cfg.repetitions(k) {
                if over_time(self) || (unit == StepUnit::Measurement && over_budget(self)) {
                    break;
                }
                self.shot(k, self.cfg.tau0 * f64::from(1u32 << k), 0.0)?;
            }
            self.sequences += 1;
        }
        Ok(())
    }

    pub fn record(&mut self, shot: Option<Shot>) -> Result<()> {
        let dist = hyperfine_distribution(&self.state, self.bath)?;
        let nf = narrowing_factor(&dist, &self.baseline)?;
        let peaks = dist.peaks(self.bandwidth);
        let (p1_abs, holevo, estimate) = if self.adaptive {
            (
                Some(self.belief.coeff(1).norm()),
                Some(self.belief.holevo_variance()),
                self.belief.estimate_mean().ok(),
            )
        } else {
            (None, None, None)
        };
        self.records.push(StepRecord {
            step: self.measurements,
            k: shot.map(|s| s.k),
            tau: shot.map(|s| s.tau),
            phi: shot.map(|s| s.phi),
            phi_update: shot.map(|s| s.phi_update),
            outcome: shot.map(|s| s.outcome),
            outcome_probability: shot.map(|s| s.outcome_probability),
            phase_fallback: shot.is_some_and(|s| s.fallback),
            p1_abs,
            holevo_variance: holevo,
            estimate,
            true_mean: dist.mean(),
            true_sigma: dist.std_dev(),
            narrowing: nf.value,
            saturated: nf.saturated,
            n_peaks: peaks.n_peaks,
            main_mass: peaks.main_mass,
            elapsed: self.elapsed,
        });
        Ok(())
    }

    pub fn summary(&self, initial_t2: Option<f64>, final_t2: Option<f64>) -> RunSummary {
        let last = self.records.last().expect("baseline record");
        RunSummary {
            measurements: self.measurements,
            elapsed: self.elapsed,
            final_narrowing: last.narrowing,
            saturated: last.saturated,
            final_peaks: last.n_peaks,
            final_main_mass: last.main_mass,
            initial_t2,
            final_t2,
            k_max: self.k_max,
            j_max: self.belief.j_max(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Shot {
    k: u32,
    tau: f64,
    phi: f64,
    phi_update: f64,
    outcome: u8,
    outcome_probability: f64,
    fallback: bool,
}

/// Final state of a run alongside its log.
#[derive(Clone, Debug)]
pub struct ProtocolRun {
    pub trace: ProtocolTrace,
    pub state: BathState,
    pub belief: Option<FourierDistribution>,
    /// Bath state at the end of every refocus segment, when requested.
    pub boundary_states: Vec<BathState>,
}

/// Adaptive narrowing: `n_steps` Ramsey measurements with sensing time and
/// phase chosen from the running estimate.
pub fn run_adaptive(
    bath: &BathSpec,
    dynamics: &mut BathDynamics,
    initial: &BathState,
    cfg: &ProtocolConfig,
) -> Result<ProtocolRun> {
    let resolved = resolve(bath, cfg, max_measurements(cfg, cfg.n_steps))?;
    let initial_t2 = state_t2(initial, dynamics, bath)?;
    let mut s = Session::new(bath, dynamics, initial.clone(), cfg, &resolved, true)?;
    s.narrow(cfg.n_steps, None)?;
    let final_t2 = state_t2(&s.state, s.dynamics, bath)?;
    let summary = s.summary(initial_t2, final_t2);
    Ok(ProtocolRun {
        trace: ProtocolTrace {
            records: s.records,
            segments: Vec::new(),
            summary,
        },
        state: s.state,
        boundary_states: Vec::new(),
        belief: Some(s.belief),
    })
}

/// Baseline: `n_steps` Ramsey measurements at fixed `tau` and `phi`; the
/// belief is not consulted.
pub fn run_nonadaptive(
    bath: &BathSpec,
    dynamics: &mut BathDynamics,
    initial: &BathState,
    tau: f64,
    phi: f64,
    n_steps: usize,
    seed: u64,
) -> Result<ProtocolRun> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("sensing time must be nonnegative, got {tau}")));
    }
    // tau is the k = 0 rung of a one-level ladder; tau = 0 keeps the default
    // tau0 only to satisfy validation
    let cfg = ProtocolConfig {
        tau0: if tau > 0.0 { tau } else { ProtocolConfig::default().tau0 },
        n_steps,
        k_max: Some(0),
        seed,
        ..ProtocolConfig::default()
    };
    cfg.validate()?;
    let resolved = Resolved { k_max: 0, j_max: 2 };
    let initial_t2 = state_t2(initial, dynamics, bath)?;
    let mut s = Session::new(bath, dynamics, initial.clone(), &cfg, &resolved, false)?;
    for _ in 0..n_steps {
        s.shot(0, tau, phi)?;
    }
    let final_t2 = state_t2(&s.state, s.dynamics, bath)?;
    let summary = s.summary(initial_t2, final_t2);
    Ok(ProtocolRun {
        trace: ProtocolTrace {
            records: s.records,
            segments: Vec::new(),
            summary,
        },
        state: s.state,
        boundary_states: Vec::new(),
        belief: None,
    })
}
