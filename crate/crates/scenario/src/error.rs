// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use pmp_core::PmpError;

use crate::state::Actor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error("{0} PMP entries requested; the scenario needs between 2 and 16")]
    InsufficientEntries(usize),
    #[error("no free PMP entry for enclave {0}")]
    NoFreeEntry(u32),
    #[error("enclave {0} region overlaps {1}")]
    Overlap(u32, String),
    #[error("enclave {0} already exists")]
    DuplicateEnclave(u32),
    #[error("unknown enclave {0}")]
    UnknownEnclave(u32),
    #[error("`{op}` is not allowed while {running} is running")]
    WrongActor { op: &'static str, running: Actor },
    #[error(transparent)]
    Pmp(#[from] PmpError),
}
