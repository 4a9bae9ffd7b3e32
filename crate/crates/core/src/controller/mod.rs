// Copyright 2026 The spinbath Authors
// SPDX-License-Identifier: Apache-2.0

//! The adaptive narrowing loop, its fixed-setting baseline and refocusing
//! schedules.

mod config;
mod protocol;
mod refocus;
mod select;
mod trace;

pub use config::*;
pub use protocol::{auto_k_max, check_aliasing, run_adaptive, run_nonadaptive, state_t2, ProtocolRun};
pub use refocus::*;
pub use select::*;
pub use trace::*;
