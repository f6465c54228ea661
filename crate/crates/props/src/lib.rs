// SPDX-License-Identifier: Apache-2.0

//! Executable forms of the five PMP checker properties and the campaigns
//! that drive them.
//!
//! A campaign enumerates (or samples) register files and accesses, runs a
//! checker under test on each case, and evaluates every property against the
//! result. Mutant checkers are included so the property suite can be shown to
//! catch real mistakes.

mod campaign;
mod checker;
mod error;
mod generate;
mod property;
mod report;
mod shrink;

pub use campaign::{run_campaign, CampaignConfig, CampaignMode, EXHAUSTIVE_MAX_ENTRIES, EXHAUSTIVE_MAX_PADDR_BITS};
pub use checker::CheckerImpl;
pub use error::CampaignError;
pub use generate::{boundary_biased_addr, random_state, BOUNDARY_BIAS_PERCENT};
pub use property::{eval_property, evaluate, Outcome, PropertyId};
pub use report::{CampaignReport, CounterExample, PropertyTally};
pub use shrink::shrink;
