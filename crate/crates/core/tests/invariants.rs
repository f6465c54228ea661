// SPDX-License-Identifier: Apache-2.0

use pmp_core::mask::{entry_aligned, entry_matches};
use pmp_core::{check_access_mask, check_access_spec, AccessRequest, PmpEntry, PmpState, Privilege};
use proptest::prelude::*;

fn state_strategy(paddr_bits: u32, max_entries: usize) -> impl Strategy<Value = PmpState> {
    let reg_max = (1u64 << (paddr_bits - 2)) - 1;
    // Mix uniform pmpaddr values with ones that have long trailing-one runs.
    let reg = prop_oneof![
        0..=reg_max,
        (0..=reg_max, 0..(paddr_bits - 2)).prop_map(move |(v, k)| (v | ((1 << k) - 1)) & reg_max),
        Just(reg_max),
    ];
    prop::collection::vec((any::<u8>(), reg), 0..=max_entries)
        .prop_map(move |raw| PmpState::new(paddr_bits, raw.into_iter().map(|(c, a)| PmpEntry::from_raw(c, a))).unwrap())
}

fn request_strategy(paddr_bits: u32) -> impl Strategy<Value = AccessRequest> {
    let max = (1u64 << paddr_bits) - 1;
    (0..=max, 0u8..4, prop::sample::select(Privilege::ALL.to_vec()))
        .prop_map(|(addr, size_exp, prv)| AccessRequest::new(addr, size_exp, prv).unwrap())
}

fn case(paddr_bits: u32) -> impl Strategy<Value = (PmpState, AccessRequest)> {
    (state_strategy(paddr_bits, 8), request_strategy(paddr_bits)).prop_flat_map(|(s, r)| {
        // Pull the address toward a region boundary half of the time.
        let bounds: Vec<u64> = (0..s.n_entries()).filter_map(|i| s.region_bounds(i).unwrap().hi()).collect();
        let max = s.max_addr();
        (Just(s), Just(r), prop::sample::select(vec![false, true]), 0usize..16, 0u64..16).prop_map(
            move |(s, mut r, snap, pick, delta)| {
                if snap && !bounds.is_empty() {
                    let hi = bounds[pick % bounds.len()];
                    r.addr = (hi + delta).saturating_sub(8).min(max);
                }
                (s, r)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn bounds_agree_with_mask_matcher((s, r) in case(32)) {
        for i in 0..s.n_entries() {
            prop_assert_eq!(s.region_contains(i, r.addr).unwrap(), entry_matches(&s, i, r.addr));
            prop_assert_eq!(
                s.access_aligned(i, r.addr, r.size_exp).unwrap(),
                entry_aligned(&s, i, r.addr, r.size_exp)
            );
        }
    }

    #[test]
    fn aligned_access_ends_in_region((s, r) in case(16)) {
        for i in 0..s.n_entries() {
            if s.region_contains(i, r.addr).unwrap() && s.access_aligned(i, r.addr, r.size_exp).unwrap() {
                prop_assert!(r.last_byte() <= s.region_bounds(i).unwrap().hi().unwrap());
            }
        }
    }

    #[test]
    fn implementations_agree((s, r) in case(32)) {
        prop_assert_eq!(check_access_spec(&s, &r), check_access_mask(&s, &r));
    }

    #[test]
    fn machine_mode_grants_superset((s, r) in case(32)) {
        let low = check_access_spec(&s, &AccessRequest { prv: Privilege::U, ..r });
        let high = check_access_spec(&s, &AccessRequest { prv: Privilege::M, ..r });
        prop_assert!(!low.r || high.r);
        prop_assert!(!low.w || high.w);
        prop_assert!(!low.x || high.x);
    }

    #[test]
    fn spec_goes_through_priority_match((s, r) in case(32)) {
        let out = check_access_spec(&s, &r);
        match s.highest_priority_match(r.addr) {
            None => prop_assert_eq!(out.any(), r.prv.is_high()),
            Some(i) => {
                let aligned = s.access_aligned(i, r.addr, r.size_exp).unwrap();
                if !aligned {
                    prop_assert!(!out.any());
                }
                for j in 0..i {
                    prop_assert!(!s.region_contains(j, r.addr).unwrap());
                }
            }
        }
    }
}

#[test]
fn exhaustive_agreement_six_bit_one_entry() {
    let mut cases = 0u64;
    for cfg in (0..=u8::MAX).filter(|c| c & 0x60 == 0) {
        for reg in 0..16 {
            let s = PmpState::new(6, [PmpEntry::from_raw(cfg, reg)]).unwrap();
            for addr in 0..64 {
                for size_exp in 0..4 {
                    for prv in Privilege::ALL {
                        let r = AccessRequest::new(addr, size_exp, prv).unwrap();
                        assert_eq!(check_access_spec(&s, &r), check_access_mask(&s, &r), "{s:?} {r:?}");
                        cases += 1;
                    }
                }
            }
        }
    }
    assert_eq!(cases, 64 * 16 * 64 * 4 * 3);
}
