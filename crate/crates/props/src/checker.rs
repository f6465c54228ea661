// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use pmp_core::{check_access_mask, check_access_spec, AccessRequest, Permissions, PmpState};

/// Which checker a campaign runs.
///
/// `Spec` and `Mask` are the two reference implementations. The remaining
/// variants are deliberately broken mutants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckerImpl {
    Spec,
    Mask,
    /// Scans from the highest index, so the lowest-priority match wins.
    PriorityReversed,
    /// Treats every entry as unlocked.
    LockIgnored,
    /// Drops the whole-access-in-region gate.
    AlignmentIgnored,
}

impl CheckerImpl {
    pub const REFERENCE: [CheckerImpl; 2] = [CheckerImpl::Spec, CheckerImpl::Mask];
    pub const MUTANTS: [CheckerImpl; 3] =
        [CheckerImpl::PriorityReversed, CheckerImpl::LockIgnored, CheckerImpl::AlignmentIgnored];

    pub fn name(self) -> &'static str {
        match self {
            CheckerImpl::Spec => "spec",
            CheckerImpl::Mask => "mask",
            CheckerImpl::PriorityReversed => "priority-reversed",
            CheckerImpl::LockIgnored => "lock-ignored",
            CheckerImpl::AlignmentIgnored => "alignment-ignored",
        }
    }

    pub fn is_mutant(self) -> bool {
        !matches!(self, CheckerImpl::Spec | CheckerImpl::Mask)
    }

    pub fn check(self, state: &PmpState, req: &AccessRequest) -> Permissions {
        match self {
            CheckerImpl::Spec => check_access_spec(state, req),
            CheckerImpl::Mask => check_access_mask(state, req),
            CheckerImpl::PriorityReversed => mutant(state, req, true, true, true),
            CheckerImpl::LockIgnored => mutant(state, req, false, false, true),
            CheckerImpl::AlignmentIgnored => mutant(state, req, false, true, false),
        }
    }
}

fn mutant(
    state: &PmpState,
    req: &AccessRequest,
    reversed: bool,
    honor_lock: bool,
    gate_alignment: bool,
) -> Permissions {
    let high = req.prv.is_high();
    let n = state.n_entries();
    let hit = if reversed {
        (0..n).rev().find(|&i| state.region_contains(i, req.addr).unwrap_or(false))
    } else {
        state.highest_priority_match(req.addr)
    };
    let Some(i) = hit else {
        return Permissions::uniform(high);
    };
    let cfg = state.entries()[i].cfg;
    let aligned = !gate_alignment || state.access_aligned(i, req.addr, req.size_exp).unwrap_or(false);
    let perms = if high && (!honor_lock || !cfg.l) { Permissions::ALL } else { cfg.permissions() };
    perms.and(aligned)
}

impl fmt::Display for CheckerImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckerImpl {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [CheckerImpl::REFERENCE.as_slice(), CheckerImpl::MUTANTS.as_slice()]
            .concat()
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown checker `{s}`"))
    }
}
