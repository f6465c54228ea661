// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::cfg::AddrMode;
use crate::error::PmpError;
use crate::state::PmpState;

/// Inclusive byte range covered by an entry, or `Empty` when it can never
/// match (OFF, or a TOR range whose top does not exceed its bottom).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionBounds {
    Empty,
    Range { lo: u64, hi: u64 },
}

impl RegionBounds {
    pub const fn contains(self, addr: u64) -> bool {
        match self {
            RegionBounds::Empty => false,
            RegionBounds::Range { lo, hi } => lo <= addr && addr <= hi,
        }
    }

    /// Whether every byte of `[addr, last]` lies inside the range.
    pub const fn covers(self, addr: u64, last: u64) -> bool {
        match self {
            RegionBounds::Empty => false,
            RegionBounds::Range { lo, hi } => lo <= addr && last <= hi,
        }
    }

    pub const fn hi(self) -> Option<u64> {
        match self {
            RegionBounds::Empty => None,
            RegionBounds::Range { hi, .. } => Some(hi),
        }
    }

    pub const fn lo(self) -> Option<u64> {
        match self {
            RegionBounds::Empty => None,
            RegionBounds::Range { lo, .. } => Some(lo),
        }
    }
}

impl PmpState {
    /// `[r_lo(i), r_hi(i)]` for entry `index`.
    pub fn region_bounds(&self, index: usize) -> Result<RegionBounds, PmpError> {
        self.entry(index)?;
        Ok(self.bounds_unchecked(index))
    }

    pub(crate) fn bounds_unchecked(&self, index: usize) -> RegionBounds {
        let entries = self.entries();
        let entry = entries[index];
        match entry.cfg.mode {
            AddrMode::Off => RegionBounds::Empty,
            AddrMode::Na4 => {
                let lo = entry.addr_reg << 2;
                RegionBounds::Range { lo, hi: lo + 3 }
            }
            AddrMode::Napot => {
                let k = entry.addr_reg.trailing_ones();
                // An all-ones pmpaddr leaves nothing above the size field and
                // covers the whole address space.
                if k >= self.addr_reg_bits() {
                    return RegionBounds::Range { lo: 0, hi: self.max_addr() };
                }
                let lo = (entry.addr_reg & !((1u64 << (k + 1)) - 1)) << 2;
                let hi = lo + (1u64 << (k + 3)) - 1;
                RegionBounds::Range { lo, hi: hi.min(self.max_addr()) }
            }
            AddrMode::Tor => {
                let lo = if index == 0 { 0 } else { entries[index - 1].addr_reg << 2 };
                let top = entry.addr_reg << 2;
                if top <= lo {
                    RegionBounds::Empty
                } else {
                    RegionBounds::Range { lo, hi: top - 1 }
                }
            }
        }
    }

    /// `r(addr, i)`: `addr` lies in the region of entry `index`.
    pub fn region_contains(&self, index: usize, addr: u64) -> Result<bool, PmpError> {
        Ok(self.region_bounds(index)?.contains(addr))
    }

    /// `a(addr, i)`: the whole access `[addr, addr + 2^size_exp - 1]` lies in
    /// the region of entry `index`.
    pub fn access_aligned(&self, index: usize, addr: u64, size_exp: u8) -> Result<bool, PmpError> {
        let last = addr + (1u64 << size_exp) - 1;
        Ok(self.region_bounds(index)?.covers(addr, last))
    }

    /// Lowest-numbered entry whose region contains `addr`.
    pub fn highest_priority_match(&self, addr: u64) -> Option<usize> {
        (0..self.n_entries()).find(|&i| self.bounds_unchecked(i).contains(addr))
    }
}
