// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::controller::{ProtocolRun, SegmentKind, CSV_HEADER_COMMENT};
use crate::error::{Error, Result};
use crate::harness::ensemble::RunOutput;
use crate::harness::scenario::Scenario;
use crate::qsim::{fit_t2, grid_for_width, hyperfine_distribution, linear_grid, ramsey_signal, BathDynamics, BathState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
    pub stderr: f64,
    pub median: f64,
}

impl Stats {
    pub const EMPTY: Stats = Stats {
        n: 0,
        mean: f64::NAN,
        std: f64::NAN,
        stderr: f64::NAN,
        median: f64::NAN,
    };

    pub fn of(values: &[f64]) -> Option<Stats> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        Some(Stats {
            n,
            mean,
            std,
            stderr: std / (n as f64).sqrt(),
            median,
        })
    }
}

pub(crate) fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        prepare_dir(parent)?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `rows` as CSV under the versioned header line.
pub fn write_csv_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "{CSV_HEADER_COMMENT}").map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn run_stem(index: usize) -> String {
    format!("run_{index:05}")
}

#[derive(Serialize)]
struct RunFile<'a> {
    index: usize,
    seed: u64,
    bath_seed: Option<u64>,
    summary: &'a crate::controller::RunSummary,
    segments: &'a [crate::controller::SegmentRecord],
}

pub(crate) fn write_run(out: &Path, o: &RunOutput) -> Result<()> {
    let dir = out.join("runs");
    prepare_dir(&dir)?;
    let stem = run_stem(o.index);
    let csv_path = dir.join(format!("{stem}.csv"));
    o.run.trace.write_csv(create(&csv_path)?)?;
    write_json(
        &dir.join(format!("{stem}.json")),
        &RunFile {
            index: o.index,
            seed: o.seed,
            bath_seed: o.bath_seed,
            summary: &o.run.trace.summary,
            segments: &o.run.trace.segments,
        },
    )
}

#[derive(Serialize)]
struct DistributionRow {
    a_z_hz: f64,
    initial: f64,
    #[serde(rename = "final")]
    last: f64,
}

#[derive(Serialize)]
struct DensityRow {
    a_z_hz: f64,
    density_per_hz: f64,
}

#[derive(Serialize)]
struct SignalRow {
    tau_s: f64,
    re: f64,
    im: f64,
    abs: f64,
}

const ESTIMATOR_POINTS: usize = 1001;

pub(crate) fn write_snapshots(out: &Path, o: &RunOutput, scenario: &Scenario) -> Result<()> {
    let dir = out.join("snapshots");
    let stem = run_stem(o.index);
    let initial = hyperfine_distribution(&o.initial, &o.bath)?;
    let last = hyperfine_distribution(&o.run.state, &o.bath)?;
    let mut order: Vec<usize> = (0..initial.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| initial.eigenvalues[a].total_cmp(&initial.eigenvalues[b]).then(a.cmp(&b)));
    let rows: Vec<DistributionRow> = order
        .iter()
        .map(|&i| DistributionRow {
            a_z_hz: initial.eigenvalues[i],
            initial: initial.probabilities[i],
            last: last.probabilities[i],
        })
        .collect();
    write_csv_rows(&dir.join(format!("{stem}_distribution.csv")), &rows)?;

    if let Some(belief) = &o.run.belief {
        let lo = rows.first().map_or(0.0, |r| r.a_z_hz);
        let hi = rows.last().map_or(0.0, |r| r.a_z_hz);
        let pad = 0.1 * (hi - lo).max(1.0);
        let grid: Vec<f64> = linear_grid(hi - lo + 2.0 * pad, ESTIMATOR_POINTS)
            .into_iter()
            .map(|x| x + lo - pad)
            .collect();
        let density = belief.evaluate(&grid);
        let rows: Vec<DensityRow> = grid
            .iter()
            .zip(density)
            .map(|(&a, d)| DensityRow {
                a_z_hz: a,
                density_per_hz: d,
            })
            .collect();
        write_csv_rows(&dir.join(format!("{stem}_estimator.csv")), &rows)?;
    }

    if let Some(r) = &scenario.refocus {
        let dynamics = BathDynamics::from_bath(&o.bath, &scenario.hamiltonian_options())?;
        let mut states = vec![&o.initial];
        states.extend(o.run.boundary_states.iter());
        for (b, state) in states.into_iter().enumerate() {
            let rows = signal_rows(state, &dynamics, &o.bath, r.signal_points)?;
            write_csv_rows(&dir.join(format!("{stem}_ramsey_b{b}.csv")), &rows)?;
        }
    }
    Ok(())
}

/// Ramsey signal over three fitted T2* (or four Gaussian T2* of the
/// distribution width when the fit fails).
fn signal_rows(
    state: &BathState,
    dynamics: &BathDynamics,
    bath: &crate::bathgen::BathSpec,
    points: usize,
) -> Result<Vec<SignalRow>> {
    let sigma = hyperfine_distribution(state, bath)?.std_dev();
    let probe = grid_for_width(sigma.max(1.0), points.max(2));
    let mag: Vec<f64> = ramsey_signal(state, dynamics, &probe).iter().map(|s| s.norm()).collect();
    let taus = match fit_t2(&mag, &probe) {
        Ok(fit) => linear_grid(3.0 * fit.t2, points.max(2)),
        Err(_) => probe,
    };
    Ok(ramsey_signal(state, dynamics, &taus)
        .into_iter()
        .zip(&taus)
        .map(|(s, &t)| SignalRow {
            tau_s: t,
            re: s.re,
            im: s.im,
            abs: s.norm(),
        })
        .collect())
}

#[derive(Serialize)]
struct AggregateRow {
    step: usize,
    runs: usize,
    mean_narrowing: f64,
    std_narrowing: f64,
    mean_elapsed_s: f64,
    mean_k: Option<f64>,
}

/// Per-step statistics over every run that reached the step.
pub(crate) fn write_aggregate(path: &Path, runs: &[&ProtocolRun]) -> Result<()> {
    let longest = runs.iter().map(|r| r.trace.records.len()).max().unwrap_or(0);
    let rows: Vec<AggregateRow> = (0..longest)
        .map(|step| {
            let recs: Vec<_> = runs.iter().filter_map(|r| r.trace.records.get(step)).collect();
            let nf: Vec<f64> = recs.iter().map(|r| r.narrowing).collect();
            let st = Stats::of(&nf).unwrap_or(Stats::EMPTY);
            let ks: Vec<f64> = recs.iter().filter_map(|r| r.k.map(f64::from)).collect();
            AggregateRow {
                step,
                runs: recs.len(),
                mean_narrowing: st.mean,
                std_narrowing: st.std,
                mean_elapsed_s: recs.iter().map(|r| r.elapsed).sum::<f64>() / recs.len() as f64,
                mean_k: (!ks.is_empty()).then(|| ks.iter().sum::<f64>() / ks.len() as f64),
            }
        })
        .collect();
    write_csv_rows(path, &rows)
}

#[derive(Serialize)]
struct TimelineRow {
    run: usize,
    boundary: usize,
    kind: &'static str,
    time_s: f64,
    measurements: usize,
    narrowing: f64,
    t2_s: Option<f64>,
}

/// One row per segment boundary of every run; boundary 0 is the initial
/// state.
pub(crate) fn write_timeline(path: &Path, runs: &[RunOutput]) -> Result<()> {
    let mut rows = Vec::new();
    for o in runs {
        let t = &o.run.trace;
        rows.push(TimelineRow {
            run: o.index,
            boundary: 0,
            kind: "initial",
            time_s: 0.0,
            measurements: 0,
            narrowing: 1.0,
            t2_s: t.summary.initial_t2,
        });
        let mut done = 0;
        for seg in &t.segments {
            done += seg.measurements;
            rows.push(TimelineRow {
                run: o.index,
                boundary: seg.index + 1,
                kind: match seg.kind {
                    SegmentKind::Narrow => "narrow",
                    SegmentKind::Free => "free",
                },
                time_s: seg.end,
                measurements: done,
                narrowing: seg.narrowing,
                t2_s: seg.t2,
            });
        }
    }
    write_csv_rows(path, &rows)
}
