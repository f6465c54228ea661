// SPDX-License-Identifier: Apache-2.0

//! Executable reference model of the RISC-V Physical Memory Protection
//! checker.
//!
//! The checker is a pure combinational function from the PMP register file,
//! an access (address, size, privilege) and produces three permission bits.
//! Two independent evaluations are provided:
//!
//! - [`check_access_spec`] scans for the highest-priority matching region
//!   using explicit `[lo, hi]` bounds.
//! - [`check_access_mask`] evaluates the same function the way hardware
//!   does: mask comparators for NA4/NAPOT, two unsigned comparators for TOR
//!   and a cascaded priority mux.

mod cfg;
mod checker;
mod error;
pub mod mask;
mod region;
mod state;

pub use cfg::{decode_cfg, encode_cfg, AddrMode, PmpCfg};
pub use checker::check_access_spec;
pub use error::PmpError;
pub use mask::check_access_mask;
pub use region::RegionBounds;
pub use state::{
    AccessRequest, Permissions, PmpEntry, PmpState, Privilege, DEFAULT_N_ENTRIES, DEFAULT_PADDR_BITS, MAX_ENTRIES,
    MAX_PADDR_BITS, MIN_PADDR_BITS,
};
