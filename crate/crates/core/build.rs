// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::Command;

fn main() {
    let describe = Command::new("git")
        .args(["describe", "--always", "--tags"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".to_string());
    println!("cargo:rustc-env=SPINBATH_GIT_DESCRIBE={describe}");
    for p in ["../../.git/HEAD", "../../.git/refs"] {
        println!("cargo:rerun-if-changed={p}");
    }
}
