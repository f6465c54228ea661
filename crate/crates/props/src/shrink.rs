// SPDX-License-Identifier: Apache-2.0

use pmp_core::{AccessRequest, RegionBounds};

use crate::report::CounterExample;

/// Greedy minimization of a counterexample.
///
/// Repeatedly drops entries that are not needed for the violation, then moves
/// the address down to the smallest boundary-adjacent candidate that still
/// violates, then shrinks the access size. Stops at a fixpoint, so shrinking a
/// shrunk counterexample returns it unchanged. Inputs that do not violate
/// their property are returned as is.
pub fn shrink(ce: &CounterExample) -> CounterExample {
    let mut best = ce.clone();
    if !best.still_violates() {
        return best;
    }
    while let Some(next) = drop_entry(&best).or_else(|| lower_addr(&best)).or_else(|| smaller_access(&best)) {
        best = next;
    }
    best
}

fn candidate(ce: &CounterExample, state: pmp_core::PmpState, request: AccessRequest) -> Option<CounterExample> {
    let next = CounterExample::new(ce.property, ce.checker, ce.case_index, state, request);
    next.still_violates().then_some(next)
}

fn drop_entry(ce: &CounterExample) -> Option<CounterExample> {
    (0..ce.state.n_entries()).find_map(|i| {
        let state = ce.state.without_entry(i).ok()?;
        candidate(ce, state, ce.request)
    })
}

fn lower_addr(ce: &CounterExample) -> Option<CounterExample> {
    let state = &ce.state;
    let max = state.max_addr();
    let mut addrs = vec![0];
    for i in 0..state.n_entries() {
        if let Ok(RegionBounds::Range { lo, hi }) = state.region_bounds(i) {
            addrs.push(lo);
            addrs.extend((0..8).filter_map(|d| hi.checked_sub(d)));
            addrs.push(hi.saturating_add(1).min(max));
        }
    }
    addrs.sort_unstable();
    addrs.dedup();
    addrs
        .into_iter()
        .take_while(|&a| a < ce.request.addr)
        .find_map(|addr| candidate(ce, *state, AccessRequest { addr, ..ce.request }))
}

fn smaller_access(ce: &CounterExample) -> Option<CounterExample> {
    (0..ce.request.size_exp).find_map(|size_exp| candidate(ce, ce.state, AccessRequest { size_exp, ..ce.request }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::CheckerImpl;
    use crate::property::PropertyId;
    use pmp_core::{AddrMode, Permissions, PmpCfg, PmpEntry, PmpState, Privilege};

    fn napot(base: u64, size: u64, perms: Permissions) -> PmpEntry {
        PmpEntry::new(PmpCfg::new(AddrMode::Napot, perms, false), PmpEntry::napot_addr_reg(base, size))
    }

    #[test]
    fn drops_uninvolved_entries() {
        let mut entries = vec![PmpEntry::OFF; 8];
        entries[3] = napot(0x1000, 0x100, Permissions::ALL);
        let state = PmpState::new(32, entries).unwrap();
        let req = AccessRequest::new(0x10FC, 3, Privilege::U).unwrap();
        let ce = CounterExample::new(PropertyId::MainLowEq3, CheckerImpl::AlignmentIgnored, 0, state, req);
        assert!(ce.still_violates());
        let small = shrink(&ce);
        assert_eq!(small.state.n_entries(), 1);
        assert!(small.still_violates());
        assert_eq!(shrink(&small), small);
    }

    #[test]
    fn priority_mutant_keeps_two_entries() {
        let mut entries = vec![PmpEntry::OFF; 8];
        entries[2] = napot(0x2000, 0x100, Permissions::NONE);
        entries[5] = napot(0x2000, 0x1000, Permissions::ALL);
        entries[6] = napot(0x8000, 0x1000, Permissions::ALL);
        let state = PmpState::new(32, entries).unwrap();
        let req = AccessRequest::new(0x2040, 2, Privilege::U).unwrap();
        let ce = CounterExample::new(PropertyId::MainLowEq3, CheckerImpl::PriorityReversed, 0, state, req);
        assert!(ce.still_violates());
        let small = shrink(&ce);
        assert_eq!(small.state.n_entries(), 2);
        assert!(small.request.addr <= req.addr);
        assert!(small.still_violates());
        assert_eq!(shrink(&small), small);
    }

    #[test]
    fn non_violating_input_unchanged() {
        let state = PmpState::disabled(32, 4).unwrap();
        let req = AccessRequest::new(0x40, 2, Privilege::U).unwrap();
        let ce = CounterExample::new(PropertyId::NoMatchEq4, CheckerImpl::Spec, 0, state, req);
        assert_eq!(shrink(&ce), ce);
    }
}
