// SPDX-License-Identifier: Apache-2.0

use pmp_core::{check_access_spec, AccessRequest, AddrMode, Permissions, PmpCfg, PmpEntry, Privilege};
use pmp_scenario::{check_isolation, Actor, MemoryLayout, Region, ScenarioConfig, ScenarioState};

const SM: Region = Region { base: 0, size: 0x1000 };
const E1: Region = Region { base: 0x4000, size: 0x1000 };
const E2: Region = Region { base: 0x8000, size: 0x2000 };

fn booted(n_entries: usize) -> ScenarioState {
    let config = ScenarioConfig { paddr_bits: 16, n_entries, ..ScenarioConfig::default() };
    ScenarioState::boot(MemoryLayout::new(SM, 0x10000).with_enclave(1, E1).with_enclave(2, E2), config).unwrap()
}

fn granted(s: &ScenarioState, addr: u64, prv: Privilege) -> Permissions {
    check_access_spec(s.pmp(), &AccessRequest::new(addr, 2, prv).unwrap())
}

fn napot(region: Region, perms: Permissions) -> PmpEntry {
    PmpEntry::new(PmpCfg::new(AddrMode::Napot, perms, false), PmpEntry::napot_addr_reg(region.base, region.size))
}

#[test]
fn operations_keep_isolation() {
    let s = booted(5);
    assert!(check_isolation(&s).is_empty());
    let in1 = s.enter_enclave(1).unwrap();
    assert!(check_isolation(&in1).is_empty());
    // Own memory open, OS memory and the other enclave closed.
    assert_eq!(granted(&in1, 0x4100, Privilege::U), Permissions::ALL);
    assert_eq!(granted(&in1, 0xF000, Privilege::U), Permissions::NONE);
    assert_eq!(granted(&in1, 0x8100, Privilege::U), Permissions::NONE);
    let back = in1.exit_enclave().unwrap();
    assert_eq!(back, s);
    assert_eq!(granted(&back, 0x4100, Privilege::S), Permissions::NONE);
    assert_eq!(granted(&back, 0xF000, Privilege::S), Permissions::ALL);
}

#[test]
fn enclave_left_open_is_caught() {
    let s = booted(4);
    let index = s.enclave_entry(1).unwrap();
    let broken = s.with_raw_entry(index, napot(E1, Permissions::ALL)).unwrap();
    let v = check_isolation(&broken);
    assert!(!v.is_empty());
    assert!(v.iter().all(|v| v.actor == Actor::Os && E1.overlaps(v.addr, 1 << v.size_exp)));
}

#[test]
fn os_entry_left_valid_is_caught() {
    let s = booted(4).enter_enclave(2).unwrap();
    let broken = s.with_raw_entry(3, napot(Region { base: 0, size: 0x10000 }, Permissions::ALL)).unwrap();
    assert!(check_isolation(&broken).iter().any(|v| v.actor == Actor::Enclave(2)));
}

#[test]
fn shadowed_open_entry_is_harmless() {
    // Entry 1 duplicates enclave 1's region with no permissions; the open
    // entry behind it never decides an access.
    let s = booted(5);
    let open = s.enclave_entry(1).unwrap();
    assert_eq!(open, 1);
    let shadowed = s
        .with_raw_entry(3, napot(E1, Permissions::ALL))
        .unwrap()
        .with_raw_entry(1, napot(E1, Permissions::NONE))
        .unwrap();
    assert!(check_isolation(&shadowed).is_empty());
}

#[test]
fn monitor_is_unconstrained() {
    let s = booted(4);
    assert_eq!(granted(&s, 0x10, Privilege::M), Permissions::ALL);
    assert_eq!(granted(&s, 0x10, Privilege::S), Permissions::NONE);
}
