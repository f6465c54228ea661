// SPDX-License-Identifier: Apache-2.0

//! Enclave isolation scenario on top of the PMP reference model.
//!
//! A security monitor running in M mode keeps its own memory behind PMP
//! entry 0, hands the OS the rest of memory through the last entry, and
//! gives each enclave one entry in between. Context switches flip those
//! entries' permission bits. After each transition, [`check_isolation`]
//! sweeps probe accesses through the reference checker to confirm nobody
//! can reach memory they should not.

mod error;
mod isolation;
mod layout;
mod script;
mod state;
mod walk;

pub use error::ScenarioError;
pub use isolation::{check_isolation, IsolationViolation, ProbeConfig, BOUNDARY_OFFSETS};
pub use layout::{MemoryLayout, Region, MIN_REGION_SIZE};
pub use script::{parse_script, run_script, Command, ScriptError, ScriptLine, StepError, Trace, TraceStep};
pub use state::{Actor, LastEntryInvalidation, ScenarioConfig, ScenarioState};
pub use walk::{random_walk, WalkReport};
