// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row per measurement; row 0 is the state before the first shot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub k: Option<u32>,
    /// Seconds.
    pub tau: Option<f64>,
    /// Phase the Ramsey measurement was taken with.
    pub phi: Option<f64>,
    /// Phase handed to the Bayesian update.
    pub phi_update: Option<f64>,
    pub outcome: Option<u8>,
    pub outcome_probability: Option<f64>,
    pub phase_fallback: bool,
    pub p1_abs: Option<f64>,
    pub holevo_variance: Option<f64>,
    /// Hz
    pub estimate: Option<f64>,
    /// Hz
    pub true_mean: f64,
    /// Hz
    pub true_sigma: f64,
    pub narrowing: f64,
    pub saturated: bool,
    pub n_peaks: usize,
    pub main_mass: f64,
    /// Seconds of sensing, overhead and free evolution so far.
    pub elapsed: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Narrow,
    Free,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub index: usize,
    pub kind: SegmentKind,
    pub start: f64,
    pub end: f64,
    pub measurements: usize,
    /// Narrowing factor at the end of the segment.
    pub narrowing: f64,
    /// Fitted T2* at the end of the segment; `None` if the signal did not decay.
    pub t2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub measurements: usize,
    pub elapsed: f64,
    pub final_narrowing: f64,
    pub saturated: bool,
    pub final_peaks: usize,
    pub final_main_mass: f64,
    pub initial_t2: Option<f64>,
    pub final_t2: Option<f64>,
    pub k_max: u32,
    pub j_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub records: Vec<StepRecord>,
    pub segments: Vec<SegmentRecord>,
    pub summary: RunSummary,
}

/// Column layout version of every CSV written by this crate.
pub const CSV_FORMAT: &str = "spinbath-csv/1";

/// First line of every CSV written by this crate.
pub const CSV_HEADER_COMMENT: &str = concat!(
    "# spinbath-csv/1 spinbath ",
    env!("CARGO_PKG_VERSION"),
    " ",
    env!("SPINBATH_GIT_DESCRIBE")
);

impl ProtocolTrace {
    pub fn narrowing_curve(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.narrowing).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER_COMMENT}").map_err(|e| Error::io("<trace>", e))?;
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| Error::io("<trace>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(step: usize) -> StepRecord {
        StepRecord {
            step,
            k: (step > 0).then_some(2),
            tau: (step > 0).then_some(4e-6),
            phi: (step > 0).then_some(0.3),
            phi_update: (step > 0).then_some(0.3),
            outcome: (step > 0).then_some(1),
            outcome_probability: (step > 0).then_some(0.4),
            phase_fallback: false,
            p1_abs: Some(0.1),
            holevo_variance: Some(0.2),
            estimate: None,
            true_mean: 1.0,
            true_sigma: 2.0,
            narrowing: 1.0,
            saturated: false,
            n_peaks: 1,
            main_mass: 1.0,
            elapsed: 4e-6 * step as f64,
        }
    }

    #[test]
    fn csv_has_version_line_and_blank_optionals() {
        let t = ProtocolTrace {
            records: vec![record(0), record(1)],
            segments: vec![],
            summary: RunSummary {
                measurements: 1,
                elapsed: 4e-6,
                final_narrowing: 1.0,
                saturated: false,
                final_peaks: 1,
                final_main_mass: 1.0,
                initial_t2: None,
                final_t2: None,
                k_max: 3,
                j_max: 8,
            },
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# spinbath-csv/1 spinbath "));
        assert!(lines[1].starts_with("step,k,tau,"));
        assert!(lines[2].starts_with("0,,,"));
        assert_eq!(lines.len(), 4);
        let back: ProtocolTrace = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
