// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Runs a small scenario through the ensemble harness and lists the files it
//! writes. Pass an output directory, or a temporary one is used.

use std::path::PathBuf;

use spinbath::harness::{run_ensemble, Job, Scenario};

const SCENARIO: &str = r#"
name = "example"
ensemble = 4
master_seed = 42
snapshots = 1

[bath]
source = "generate"
n_spins = 6
per_run = true

[protocol]
n_steps = 12
"#;

fn main() -> spinbath::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("spinbath_example"), PathBuf::from);
    let scenario = Scenario::from_toml(SCENARIO)?;
    let report = run_ensemble(&scenario, scenario.fields[0], Job::Narrowing, &out, 0)?;
    for r in &report.runs {
        println!("run {} (bath seed {:?}): N.F. {:.2}", r.index, r.bath_seed, r.final_narrowing);
    }
    let mut files: Vec<_> = walk(&out);
    files.sort();
    for f in files {
        println!("  {}", f.strip_prefix(&out).unwrap_or(&f).display());
    }
    Ok(())
}

fn walk(dir: &std::path::Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).into_iter().flatten().flatten() {
        let p = entry.path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}
