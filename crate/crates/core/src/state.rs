// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cfg::PmpCfg;
use crate::error::PmpError;

pub const MAX_ENTRIES: usize = 16;
pub const MIN_PADDR_BITS: u32 = 3;
pub const MAX_PADDR_BITS: u32 = 56;
pub const DEFAULT_PADDR_BITS: u32 = 32;
pub const DEFAULT_N_ENTRIES: usize = 8;

/// Checker output bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Permissions {
    pub r: bool,
    pub w: bool,
    pub x: bool,
}

impl Permissions {
    pub const NONE: Permissions = Permissions { r: false, w: false, x: false };
    pub const ALL: Permissions = Permissions { r: true, w: true, x: true };

    /// Packed as bit 0 = r, bit 1 = w, bit 2 = x (the pmpcfg order).
    pub const fn bits(self) -> u8 {
        (self.r as u8) | (self.w as u8) << 1 | (self.x as u8) << 2
    }

    pub const fn from_bits(bits: u8) -> Self {
        Permissions { r: bits & 1 != 0, w: bits & 2 != 0, x: bits & 4 != 0 }
    }

    pub const fn uniform(granted: bool) -> Self {
        Permissions { r: granted, w: granted, x: granted }
    }

    pub const fn any(self) -> bool {
        self.r || self.w || self.x
    }

    pub const fn and(self, gate: bool) -> Self {
        Permissions { r: self.r && gate, w: self.w && gate, x: self.x && gate }
    }
}

impl fmt::Display for Permissions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |on: bool, ch: char| if on { ch } else { '-' };
        write!(f, "{}{}{}", c(self.r, 'r'), c(self.w, 'w'), c(self.x, 'x'))
    }
}

/// Effective privilege of an access. Only M counts as high.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Privilege {
    U,
    S,
    M,
}

impl Privilege {
    pub const ALL: [Privilege; 3] = [Privilege::U, Privilege::S, Privilege::M];

    pub const fn is_high(self) -> bool {
        matches!(self, Privilege::M)
    }

    /// Architectural mode encoding (U=0, S=1, M=3).
    pub const fn encoding(self) -> u8 {
        match self {
            Privilege::U => 0,
            Privilege::S => 1,
            Privilege::M => 3,
        }
    }
}

impl fmt::Display for Privilege {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Privilege::U => "U",
            Privilege::S => "S",
            Privilege::M => "M",
        })
    }
}

impl FromStr for Privilege {
    type Err = PmpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "U" | "USER" => Ok(Privilege::U),
            "S" | "SUPERVISOR" => Ok(Privilege::S),
            "M" | "MACHINE" => Ok(Privilege::M),
            _ => Err(PmpError::Privilege(s.to_string())),
        }
    }
}

/// A memory access presented to the checker: `2^size_exp` bytes starting at
/// `addr`, issued at privilege `prv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AccessRequest {
    pub addr: u64,
    pub size_exp: u8,
    pub prv: Privilege,
}

impl AccessRequest {
    pub fn new(addr: u64, size_exp: u8, prv: Privilege) -> Result<Self, PmpError> {
        if size_exp > 3 {
            return Err(PmpError::SizeExp(size_exp));
        }
        Ok(AccessRequest { addr, size_exp, prv })
    }

    pub const fn bytes(&self) -> u64 {
        1 << self.size_exp
    }

    /// Address of the last byte touched. Computed without wrapping, so it may
    /// lie beyond the physical address space.
    pub const fn last_byte(&self) -> u64 {
        self.addr + self.bytes() - 1
    }
}

/// One PMP entry: configuration plus the raw pmpaddr value (byte address >> 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PmpEntry {
    pub cfg: PmpCfg,
    pub addr_reg: u64,
}

impl PmpEntry {
    pub const OFF: PmpEntry = PmpEntry { cfg: PmpCfg::OFF, addr_reg: 0 };

    pub const fn new(cfg: PmpCfg, addr_reg: u64) -> Self {
        PmpEntry { cfg, addr_reg }
    }

    pub fn from_raw(cfg: u8, addr_reg: u64) -> Self {
        PmpEntry { cfg: PmpCfg::decode(cfg), addr_reg }
    }

    /// pmpaddr value of a NAPOT region of `size` bytes (a power of two, at
    /// least 8) based at `base` (aligned to `size`).
    pub const fn napot_addr_reg(base: u64, size: u64) -> u64 {
        (base | (size / 2 - 1)) >> 2
    }
}

/// The PMP register file: up to 16 entries in priority order (index 0 wins)
/// plus the physical address width.
///
/// Immutable once built; the `with_*` methods return modified copies.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct PmpState {
    entries: [PmpEntry; MAX_ENTRIES],
    n_entries: u8,
    paddr_bits: u8,
}

impl PmpState {
    pub fn new(paddr_bits: u32, entries: impl IntoIterator<Item = PmpEntry>) -> Result<Self, PmpError> {
        if !(MIN_PADDR_BITS..=MAX_PADDR_BITS).contains(&paddr_bits) {
            return Err(PmpError::AddrWidth(paddr_bits));
        }
        let mut state = PmpState { entries: [PmpEntry::OFF; MAX_ENTRIES], n_entries: 0, paddr_bits: paddr_bits as u8 };
        let mut n = 0usize;
        for entry in entries {
            if n == MAX_ENTRIES {
                return Err(PmpError::TooManyEntries(n + 1));
            }
            state.check_addr_reg(entry.addr_reg)?;
            state.entries[n] = entry;
            n += 1;
        }
        state.n_entries = n as u8;
        Ok(state)
    }

    /// `n_entries` entries, all OFF.
    pub fn disabled(paddr_bits: u32, n_entries: usize) -> Result<Self, PmpError> {
        if n_entries > MAX_ENTRIES {
            return Err(PmpError::TooManyEntries(n_entries));
        }
        PmpState::new(paddr_bits, std::iter::repeat_n(PmpEntry::OFF, n_entries))
    }

    pub fn entries(&self) -> &[PmpEntry] {
        &self.entries[..self.n_entries as usize]
    }

    pub fn entry(&self, index: usize) -> Result<&PmpEntry, PmpError> {
        self.entries().get(index).ok_or(PmpError::IndexOutOfRange { index, n_entries: self.n_entries() })
    }

    pub const fn n_entries(&self) -> usize {
        self.n_entries as usize
    }

    pub const fn paddr_bits(&self) -> u32 {
        self.paddr_bits as u32
    }

    /// Width of a pmpaddr register (`paddr_bits - 2`).
    pub const fn addr_reg_bits(&self) -> u32 {
        self.paddr_bits as u32 - 2
    }

    pub const fn addr_reg_mask(&self) -> u64 {
        (1 << self.addr_reg_bits()) - 1
    }

    /// Highest physical byte address.
    pub const fn max_addr(&self) -> u64 {
        (1 << self.paddr_bits) - 1
    }

    pub fn check_addr(&self, addr: u64) -> Result<(), PmpError> {
        if addr > self.max_addr() {
            return Err(PmpError::AddrTooWide { addr, paddr_bits: self.paddr_bits() });
        }
        Ok(())
    }

    fn check_addr_reg(&self, value: u64) -> Result<(), PmpError> {
        if value > self.addr_reg_mask() {
            return Err(PmpError::AddrRegTooWide { value, width: self.addr_reg_bits() });
        }
        Ok(())
    }

    pub fn with_entry(&self, index: usize, entry: PmpEntry) -> Result<Self, PmpError> {
        self.entry(index)?;
        self.check_addr_reg(entry.addr_reg)?;
        let mut next = *self;
        next.entries[index] = entry;
        Ok(next)
    }

    /// Copy with entry `index` removed; later entries move up one slot.
    pub fn without_entry(&self, index: usize) -> Result<Self, PmpError> {
        self.entry(index)?;
        let entries = self.entries().iter().enumerate().filter(|&(i, _)| i != index).map(|(_, e)| *e);
        PmpState::new(self.paddr_bits(), entries)
    }
}

impl fmt::Debug for PmpState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PmpState").field("paddr_bits", &self.paddr_bits).field("entries", &self.entries()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    paddr_bits: u32,
    entries: Vec<PmpEntry>,
}

impl From<PmpState> for StateRepr {
    fn from(state: PmpState) -> Self {
        StateRepr { paddr_bits: state.paddr_bits(), entries: state.entries().to_vec() }
    }
}

impl TryFrom<StateRepr> for PmpState {
    type Error = PmpError;

    fn try_from(repr: StateRepr) -> Result<Self, Self::Error> {
        PmpState::new(repr.paddr_bits, repr.entries)
    }
}
