// SPDX-License-Identifier: Apache-2.0

use crate::state::{AccessRequest, Permissions, PmpState};

/// Checker output computed from the region primitives.
///
/// With no matching entry the result is all-granted in M mode and
/// all-denied otherwise. Otherwise the first matching entry decides: its
/// permission bits in S/U mode, and `!l || bit` in M mode, both gated by the
/// whole access fitting inside that entry's region.
pub fn check_access_spec(state: &PmpState, req: &AccessRequest) -> Permissions {
    debug_assert!(req.addr <= state.max_addr());
    let high = req.prv.is_high();
    let Some(index) = state.highest_priority_match(req.addr) else {
        return Permissions::uniform(high);
    };
    let cfg = state.entries()[index].cfg;
    let aligned = state.bounds_unchecked(index).covers(req.addr, req.last_byte());
    let perms = if high && !cfg.l { Permissions::ALL } else { cfg.permissions() };
    perms.and(aligned)
}
