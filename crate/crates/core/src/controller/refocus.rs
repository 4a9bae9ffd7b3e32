// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Narrowing interleaved with free evolution of the bath.

use serde::{Deserialize, Serialize};

use crate::bathgen::BathSpec;
use crate::bayes::FourierDistribution;
use crate::controller::config::ProtocolConfig;
use crate::controller::protocol::{max_measurements, resolve, state_t2, ProtocolRun, Session};
use crate::controller::trace::{ProtocolTrace, SegmentKind, SegmentRecord};
use crate::error::{Error, Result};
use crate::qsim::{free_evolve, BathDynamics, BathState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum Segment {
    /// Adaptive narrowing until either budget is spent (or the NF cap).
    Narrow {
        /// In units of the protocol's `step_unit`.
        steps: Option<usize>,
        /// Seconds of sensing plus overhead.
        duration: Option<f64>,
    },
    /// Electron parked while the bath evolves, seconds.
    Free { duration: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefocusOptions {
    /// Electron projection during free evolution.
    pub idle_mu: u8,
    /// Keep the estimator across segments; otherwise restart from the prior.
    pub carry_estimator: bool,
    /// Gaussian broadening applied to a carried estimator after each free
    /// period, as a fraction of the initial sigma_z.
    pub rewiden: Option<f64>,
    /// Fit T2* at every segment boundary.
    pub fit_t2: bool,
    /// Keep a copy of the bath state at every segment boundary.
    pub keep_states: bool,
}

impl Default for RefocusOptions {
    fn default() -> Self {
        Self {
            idle_mu: 0,
            carry_estimator: true,
            rewiden: None,
            fit_t2: true,
            keep_states: false,
        }
    }
}

/// Runs `schedule` in order. Records carry a global clock; free segments add
/// one record at their end.
pub fn run_refocus_schedule(
    bath: &BathSpec,
    dynamics: &mut BathDynamics,
    initial: &BathState,
    cfg: &ProtocolConfig,
    schedule: &[Segment],
    opts: &RefocusOptions,
) -> Result<ProtocolRun> {
    if opts.rewiden.is_some_and(|w| !(w >= 0.0)) {
        return Err(Error::InvalidArgument("rewiden must be nonnegative".into()));
    }
    if opts.idle_mu > 1 {
        return Err(Error::InvalidArgument(format!("idle_mu must be 0 or 1, got {}", opts.idle_mu)));
    }
    for seg in schedule {
        match *seg {
            Segment::Narrow { steps, duration } => {
                if steps.is_none() && duration.is_none() {
                    return Err(Error::InvalidArgument("narrowing segment needs a budget".into()));
                }
                if duration.is_some_and(|d| !(d > 0.0)) {
                    return Err(Error::InvalidArgument("narrowing duration must be positive".into()));
                }
            }
            Segment::Free { duration } if !(duration >= 0.0) => {
                return Err(Error::InvalidArgument(format!("free duration must be nonnegative, got {duration}")));
            }
            Segment::Free { .. } => {}
        }
    }
    // every shot lasts at least tau0, which bounds duration-limited segments
    let budget: usize = schedule
        .iter()
        .map(|s| match *s {
            Segment::Narrow { steps, duration } => {
                let by_steps = steps.map_or(usize::MAX, |n| max_measurements(cfg, n));
                let by_time = duration.map_or(usize::MAX, |d| (d / cfg.tau0).ceil() as usize);
                by_steps.min(by_time)
            }
            Segment::Free { .. } => 0,
        })
        .sum();
    let resolved = resolve(bath, cfg, budget)?;
    let initial_t2 = if opts.fit_t2 { state_t2(initial, dynamics, bath)? } else { None };
    let mut s = Session::new(bath, dynamics, initial.clone(), cfg, &resolved, true)?;
    let prior = s.belief.clone();
    let mut segments = Vec::with_capacity(schedule.len());
    let mut boundary_states = Vec::new();
    for (index, seg) in schedule.iter().enumerate() {
        let start = s.elapsed;
        let start_n = s.measurements;
        let kind = match *seg {
            Segment::Narrow { steps, duration } => {
                if !opts.carry_estimator {
                    s.belief = prior.clone();
                    s.last_outcomes = [None, None];
                }
                s.narrow(steps.unwrap_or(usize::MAX), duration)?;
                SegmentKind::Narrow
            }
            Segment::Free { duration } => {
                s.state = free_evolve(&s.state, s.dynamics, duration, opts.idle_mu)?;
                s.elapsed += duration;
                if let Some(w) = opts.rewiden {
                    s.belief = s.belief.broaden(w * s.baseline.std_dev());
                }
                s.record(None)?;
                SegmentKind::Free
            }
        };
        let t2 = if opts.fit_t2 { state_t2(&s.state, s.dynamics, bath)? } else { None };
        if opts.keep_states {
            boundary_states.push(s.state.clone());
        }
        segments.push(SegmentRecord {
            index,
            kind,
            start,
            end: s.elapsed,
            measurements: s.measurements - start_n,
            narrowing: s.records.last().map_or(f64::NAN, |r| r.narrowing),
            t2,
        });
    }
    let final_t2 = segments.last().map_or(initial_t2, |seg| seg.t2);
    let summary = s.summary(initial_t2, final_t2);
    Ok(ProtocolRun {
        trace: ProtocolTrace {
            records: s.records,
            segments,
            summary,
        },
        state: s.state,
        belief: Some::<FourierDistribution>(s.belief),
        boundary_states,
    })
}
