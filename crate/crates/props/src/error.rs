// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use pmp_core::PmpError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CampaignError {
    #[error(
        "exhaustive campaigns need paddr_bits <= 8 and n_entries <= 2 (got {paddr_bits} bits, {n_entries} entries)"
    )]
    Intractable { paddr_bits: u32, n_entries: usize },
    #[error("case cap {cap} is smaller than the {states} register-file states to enumerate")]
    CapBelowStateSpace { cap: u64, states: u64 },
    #[error("randomized campaigns need at least one trial")]
    NoTrials,
    #[error(transparent)]
    Pmp(#[from] PmpError),
}
