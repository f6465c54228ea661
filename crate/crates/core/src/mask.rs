// SPDX-License-Identifier: Apache-2.0

//! Hardware-style checker evaluation.
//!
//! Works on the raw encoded cfg bytes. NA4 and NAPOT share one mask
//! comparator, TOR uses a pair of unsigned comparators, and the final result
//! is a priority mux chain folded from the lowest-priority entry upward.
//! Nothing here calls into the bounds-based code in `region`.

use crate::state::{AccessRequest, Permissions, PmpState};

const A_TOR: u8 = 1;
const A_NA4: u8 = 2;
const L_BIT: u8 = 0x80;
const RWX: u8 = 0b111;

/// Byte-granular match mask for an NA4/NAPOT entry, `paddr_bits + 1` bits
/// wide. Ones mark address bits ignored by the comparator.
fn napot_mask(state: &PmpState, cfg: u8, addr_reg: u64) -> u64 {
    let width = state.addr_reg_bits() + 1;
    let field = (1u64 << width) - 1;
    let a0 = u64::from((cfg >> 3) & 1);
    let ext = (addr_reg << 1 | a0) & field;
    let mask = ext & !(ext.wrapping_add(1) & field);
    mask << 2 | 0b11
}

fn mode(cfg: u8) -> u8 {
    (cfg >> 3) & 0b11
}

fn tor_bottom(state: &PmpState, index: usize) -> u64 {
    if index == 0 {
        0
    } else {
        state.entries()[index - 1].addr_reg << 2
    }
}

/// Whether entry `index` matches the byte address `addr` (no bounds involved).
pub fn entry_matches(state: &PmpState, index: usize, addr: u64) -> bool {
    let entry = state.entries()[index];
    let cfg = entry.cfg.encode();
    let comparand = entry.addr_reg << 2;
    match mode(cfg) {
        0 => false,
        A_TOR => !(addr < tor_bottom(state, index)) && addr < comparand,
        _ => {
            let mask = napot_mask(state, cfg, entry.addr_reg);
            addr & !mask == comparand & !mask
        }
    }
}

/// Whether the access `[addr, addr + 2^size_exp - 1]` stays inside entry
/// `index`, computed with a carry-out bit in place of bounds arithmetic.
pub fn entry_aligned(state: &PmpState, index: usize, addr: u64, size_exp: u8) -> bool {
    let entry = state.entries()[index];
    let cfg = entry.cfg.encode();
    let end = addr + ((1u64 << size_exp) - 1);
    let carry = end >> state.paddr_bits() != 0;
    match mode(cfg) {
        0 => false,
        A_TOR => {
            let top = entry.addr_reg << 2;
            !(addr < tor_bottom(state, index)) && end < top
        }
        m => {
            debug_assert!(m == A_NA4 || m == 3);
            let mask = napot_mask(state, cfg, entry.addr_reg);
            let comparand = entry.addr_reg << 2;
            !carry && addr & !mask == comparand & !mask && end & !mask == comparand & !mask
        }
    }
}

pub fn check_access_mask(state: &PmpState, req: &AccessRequest) -> Permissions {
    let high = req.prv.is_high();
    let default = if high { RWX } else { 0 };
    let bits = (0..state.n_entries()).rev().fold(default, |lower, i| {
        if !entry_matches(state, i, req.addr) {
            return lower;
        }
        let cfg = state.entries()[i].cfg.encode();
        let ignore = if high && cfg & L_BIT == 0 { RWX } else { 0 };
        let gate = if entry_aligned(state, i, req.addr, req.size_exp) { RWX } else { 0 };
        (cfg & RWX | ignore) & gate
    });
    Permissions::from_bits(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::{AddrMode, PmpCfg};
    use crate::state::{PmpEntry, Privilege};

    #[test]
    fn napot_mask_values() {
        let s = PmpState::disabled(8, 1).unwrap();
        // NA4 ignores only the two byte-offset bits.
        assert_eq!(napot_mask(&s, 0x10, 0x12), 0b11);
        // 0b0111 → 64-byte region.
        assert_eq!(napot_mask(&s, 0x18, 0b0111), 0x3F);
        // All ones: every bit ignored, including the carry position.
        assert_eq!(napot_mask(&s, 0x18, 0x3F), 0x1FF);
    }

    #[test]
    fn tor_pair_empty_range() {
        let cfg = PmpCfg::new(AddrMode::Tor, Permissions::ALL, false);
        let s = PmpState::new(8, [PmpEntry::new(cfg, 0x10), PmpEntry::new(cfg, 0x10)]).unwrap();
        assert!((0..256).all(|a| !entry_matches(&s, 1, a)));
    }

    #[test]
    fn all_ones_region_rejects_wrapping_access() {
        let cfg = PmpCfg::new(AddrMode::Napot, Permissions::ALL, false);
        let s = PmpState::new(8, [PmpEntry::new(cfg, 0x3F)]).unwrap();
        let req = AccessRequest::new(0xFC, 3, Privilege::U).unwrap();
        assert_eq!(check_access_mask(&s, &req), Permissions::NONE);
        let req = AccessRequest::new(0xF8, 3, Privilege::U).unwrap();
        assert_eq!(check_access_mask(&s, &req), Permissions::ALL);
    }
}
