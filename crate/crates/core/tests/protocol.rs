// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive, fixed-time and segmented narrowing runs.

mod common;

use std::f64::consts::PI;

use spinbath::bayes::{FourierDistribution, Prior};
use spinbath::controller::{
    min_holevo_phase, run_adaptive, run_nonadaptive, run_refocus_schedule, select_k, ProtocolConfig, RefocusOptions,
    Segment,
};
use spinbath::qsim::{hyperfine_distribution, BathState};
use spinbath::Error;

use common::{bath, dynamics, TAU0};

fn thermal(n: usize) -> BathState {
    BathState::thermal(n)
}

#[test]
fn zero_steps_leave_only_the_baseline() {
    let b = bath(5, 1, 0.25);
    let mut d = dynamics(&b);
    let cfg = ProtocolConfig { n_steps: 0, ..ProtocolConfig::default() };
    let run = run_adaptive(&b, &mut d, &thermal(5), &cfg).unwrap();
    assert_eq!(run.trace.records.len(), 1);
    assert_eq!(run.trace.records[0].narrowing, 1.0);
    assert_eq!(run.trace.summary.measurements, 0);
}

#[test]
fn same_seed_gives_identical_runs_and_seeds_differ() {
    let b = bath(6, 2, 0.25);
    let mut d = dynamics(&b);
    let cfg = ProtocolConfig { seed: 9, ..ProtocolConfig::default() };
    let a = run_adaptive(&b, &mut d, &thermal(6), &cfg).unwrap();
    let again = run_adaptive(&b, &mut d, &thermal(6), &cfg).unwrap();
    assert_eq!(a.trace, again.trace);
    assert_eq!(a.state.rho, again.state.rho);

    let settings = |r: &spinbath::controller::ProtocolRun| -> Vec<(Option<u32>, Option<u64>, Option<u8>)> {
        r.trace.records.iter().map(|x| (x.k, x.phi.map(f64::to_bits), x.outcome)).collect()
    };
    let mut seen = vec![settings(&a)];
    for seed in 10..14 {
        let other = run_adaptive(&b, &mut d, &thermal(6), &ProtocolConfig { seed, ..cfg.clone() }).unwrap();
        let s = settings(&other);
        assert!(!seen.contains(&s), "seed {seed} repeats a trajectory");
        seen.push(s);
    }
}

#[test]
fn records_are_consistent_over_a_run() {
    let b = bath(7, 3, 0.25);
    let mut d = dynamics(&b);
    let run = run_adaptive(&b, &mut d, &thermal(7), &ProtocolConfig { seed: 4, ..ProtocolConfig::default() }).unwrap();
    let r = &run.trace.records;
    assert_eq!(r.len(), 21);
    assert_eq!(r[0].narrowing, 1.0);
    assert!(r.windows(2).all(|w| w[1].elapsed > w[0].elapsed));
    assert!(r.iter().skip(1).all(|x| x.outcome_probability.is_some_and(|p| (0.0..=1.0).contains(&p))));
    assert!(run.trace.summary.final_narrowing > 1.0);
}

#[test]
fn running_maximum_of_k_never_drops() {
    let b = bath(7, 5, 0.25);
    let mut d = dynamics(&b);
    let mut held = 0;
    let mut total = 0;
    for seed in 0..8 {
        let run = run_adaptive(&b, &mut d, &thermal(7), &ProtocolConfig { seed, ..ProtocolConfig::default() }).unwrap();
        let mut best = 0;
        let mut prev_best = 0;
        for k in run.trace.records.iter().filter_map(|x| x.k) {
            best = best.max(k);
            total += 1;
            held += usize::from(best >= prev_best);
            prev_best = best;
        }
    }
    assert!(held as f64 >= 0.9 * total as f64);
}

#[test]
fn single_shot_schedule_narrows_to_one_peak() {
    let b = bath(7, 1, 0.25);
    let mut d = dynamics(&b);
    let cfg = ProtocolConfig { g: 1, f: 0, seed: 3, ..ProtocolConfig::default() };
    let run = run_adaptive(&b, &mut d, &thermal(7), &cfg).unwrap();
    assert_eq!(run.trace.summary.measurements, 20);
    assert!(run.trace.summary.final_narrowing > 3.0);
    assert_eq!(run.trace.summary.final_peaks, 1);
}

#[test]
fn fixed_time_runs_are_seeded_and_can_split_the_distribution() {
    let b = bath(7, 1, 0.25);
    let mut d = dynamics(&b);
    let a = run_nonadaptive(&b, &mut d, &thermal(7), TAU0, 0.0, 20, 7).unwrap();
    let again = run_nonadaptive(&b, &mut d, &thermal(7), TAU0, 0.0, 20, 7).unwrap();
    assert_eq!(a.trace, again.trace);
    assert!(a.belief.is_none());
    let sigma0 = hyperfine_distribution(&thermal(7), &b).unwrap().std_dev();
    let split = (0..10)
        .map(|seed| run_nonadaptive(&b, &mut d, &thermal(7), TAU0, 0.0, 20, seed).unwrap())
        .filter(|r| hyperfine_distribution(&r.state, &b).unwrap().peaks(0.15 * sigma0).n_peaks >= 2)
        .count();
    assert!(split >= 1);
}

#[test]
fn zero_time_fixed_runs_change_nothing() {
    let b = bath(5, 2, 0.25);
    let mut d = dynamics(&b);
    let run = run_nonadaptive(&b, &mut d, &thermal(5), 0.0, 0.0, 15, 1).unwrap();
    assert!(run.trace.records.iter().all(|r| r.narrowing == 1.0));
    assert!(run.trace.records.iter().skip(1).all(|r| r.outcome == Some(0)));
    assert_eq!(run.state.rho, thermal(5).rho);
}

#[test]
fn aliasing_sensing_time_is_refused() {
    let b = bath(7, 1, 0.25);
    let mut d = dynamics(&b);
    let cfg = ProtocolConfig { tau0: 50e-6, ..ProtocolConfig::default() };
    match run_adaptive(&b, &mut d, &thermal(7), &cfg) {
        Err(Error::Aliasing { .. }) => {}
        other => panic!("expected an aliasing error, got {other:?}"),
    }
}

#[test]
fn zero_free_period_matches_a_continuous_run() {
    let b = bath(6, 4, 0.25);
    let mut d = dynamics(&b);
    let cfg = ProtocolConfig { g: 1, f: 0, seed: 21, ..ProtocolConfig::default() };
    let continuous = run_adaptive(&b, &mut d, &thermal(6), &cfg).unwrap();
    let schedule = [
        Segment::Narrow { steps: Some(8), duration: None },
        Segment::Free { duration: 0.0 },
        Segment::Narrow { steps: Some(12), duration: None },
    ];
    let split = run_refocus_schedule(&b, &mut d, &thermal(6), &cfg, &schedule, &RefocusOptions::default()).unwrap();
    let mut curve = split.trace.narrowing_curve();
    curve.remove(9); // the record written at the end of the free period
    assert_eq!(curve, continuous.trace.narrowing_curve());
    assert_eq!(split.state.rho, continuous.state.rho);
}

#[test]
fn empty_schedule_keeps_the_baseline() {
    let b = bath(5, 3, 0.25);
    let mut d = dynamics(&b);
    let run =
        run_refocus_schedule(&b, &mut d, &thermal(5), &ProtocolConfig::default(), &[], &RefocusOptions::default())
            .unwrap();
    assert_eq!(run.trace.records.len(), 1);
    assert!(run.trace.segments.is_empty());
    assert_eq!(run.trace.summary.final_narrowing, 1.0);
}

#[test]
fn bad_schedules_are_rejected() {
    let b = bath(4, 3, 0.25);
    let mut d = dynamics(&b);
    let cfg = ProtocolConfig::default();
    let opts = RefocusOptions::default();
    for schedule in [
        vec![Segment::Narrow { steps: None, duration: None }],
        vec![Segment::Free { duration: -1.0 }],
        vec![Segment::Narrow { steps: None, duration: Some(0.0) }],
    ] {
        assert!(run_refocus_schedule(&b, &mut d, &thermal(4), &cfg, &schedule, &opts).is_err());
    }
    let rewiden = RefocusOptions { rewiden: Some(-0.1), ..RefocusOptions::default() };
    assert!(run_refocus_schedule(&b, &mut d, &thermal(4), &cfg, &[], &rewiden).is_err());
}

#[test]
fn sensing_exponent_shifts_with_the_offset() {
    let dist = FourierDistribution::init_prior(Prior::Gaussian { center: 0.0, width: 5e3 }, TAU0, 512).unwrap();
    let base = select_k(&dist, 0.0, 12);
    assert!(base > 0 && base < 11);
    assert_eq!(select_k(&dist, 1.0, 12), base + 1);
    assert_eq!(select_k(&dist, -1.0, 12), base - 1);
}

/// Outcome-averaged posterior Holevo variance through two explicit updates.
fn averaged_posterior_variance(dist: &FourierDistribution, k: u32, phi: f64) -> f64 {
    let tau = f64::from(1u32 << k) * dist.tau0;
    // exact for the degree of density x likelihood
    const N: usize = 512;
    let grid: Vec<f64> = (0..N).map(|i| i as f64 / N as f64 / dist.tau0).collect();
    let density = dist.evaluate(&grid);
    let da = 1.0 / (N as f64 * dist.tau0);
    let p0: f64 = grid
        .iter()
        .zip(&density)
        .map(|(a, p)| p * 0.5 * (1.0 + (2.0 * PI * a * tau + phi).cos()) * da)
        .sum();
    let mut total = 0.0;
    for (mu, p) in [(0u8, p0), (1, 1.0 - p0)] {
        if p > 1e-12 {
            total += p * dist.update(mu, k, phi, f64::INFINITY).unwrap().holevo_variance();
        }
    }
    total
}

#[test]
fn chosen_phase_minimises_the_expected_posterior_variance() {
    for (center, width, k) in [(31e3, 2e3, 3u32), (-120e3, 600.0, 5), (7e3, 40e3, 1), (250e3, 15e3, 2)] {
        let dist = FourierDistribution::init_prior(Prior::Gaussian { center, width }, TAU0, 192).unwrap();
        let chosen = min_holevo_phase(&dist, k, f64::INFINITY);
        let at_chosen = averaged_posterior_variance(&dist, k, chosen);
        let brute = (0..360)
            .map(|i| averaged_posterior_variance(&dist, k, i as f64 * PI / 360.0))
            .fold(f64::INFINITY, f64::min);
        assert!(at_chosen <= brute * (1.0 + 1e-6) + 1e-15, "k={k}: {at_chosen} vs grid {brute}");
    }
}

#[test]
fn symmetric_belief_is_probed_on_the_steepest_fringe_point() {
    // the fringe is steepest pi/2 away from 2 pi a 2^k tau0
    let a = 41e3;
    for k in 0..4u32 {
        let tau = f64::from(1u32 << k) * TAU0;
        let width = 0.6 / (2.0 * PI * tau);
        let dist = FourierDistribution::init_prior(Prior::Gaussian { center: a, width }, TAU0, 1024).unwrap();
        let phi = min_holevo_phase(&dist, k, f64::INFINITY);
        let fringe = (2.0 * PI * a * tau + phi).rem_euclid(PI);
        assert!((fringe - PI / 2.0).abs() < 1e-3, "k={k}: fringe phase {fringe}");
    }
}
