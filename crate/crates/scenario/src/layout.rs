// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ScenarioError;

/// Smallest extent one NAPOT entry can describe.
pub const MIN_REGION_SIZE: u64 = 8;

/// A naturally aligned power-of-two extent `[base, base + size)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Region {
    pub base: u64,
    pub size: u64,
}

impl Region {
    pub fn new(base: u64, size: u64) -> Result<Self, ScenarioError> {
        if !size.is_power_of_two() || size < MIN_REGION_SIZE {
            return Err(ScenarioError::Layout(format!(
                "region size {size:#x} is not a power of two of at least {MIN_REGION_SIZE} bytes"
            )));
        }
        if !base.is_multiple_of(size) {
            return Err(ScenarioError::Layout(format!("region base {base:#x} is not aligned to its size {size:#x}")));
        }
        Ok(Region { base, size })
    }

    /// One past the last byte.
    pub const fn end(self) -> u64 {
        self.base + self.size
    }

    pub const fn contains(self, addr: u64) -> bool {
        self.base <= addr && addr < self.end()
    }

    /// Whether `[addr, addr + len)` lies entirely inside the region.
    pub const fn covers(self, addr: u64, len: u64) -> bool {
        self.base <= addr && addr + len <= self.end()
    }

    pub const fn overlaps(self, addr: u64, len: u64) -> bool {
        addr < self.end() && self.base < addr + len
    }

    pub const fn overlaps_region(self, other: Region) -> bool {
        self.overlaps(other.base, other.size)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:#x}, {:#x})", self.base, self.end())
    }
}

/// Physical memory split between the security monitor, enclaves and the OS.
/// The OS owns whatever the other regions leave.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryLayout {
    pub sm_region: Region,
    pub enclave_regions: BTreeMap<u32, Region>,
    pub total_memory: u64,
}

impl MemoryLayout {
    pub fn new(sm_region: Region, total_memory: u64) -> Self {
        MemoryLayout { sm_region, enclave_regions: BTreeMap::new(), total_memory }
    }

    pub fn with_enclave(mut self, id: u32, region: Region) -> Self {
        self.enclave_regions.insert(id, region);
        self
    }

    /// Checks alignment, bounds and pairwise disjointness for a machine with
    /// `paddr_bits` of physical address space.
    pub fn validate(&self, paddr_bits: u32) -> Result<(), ScenarioError> {
        let total = self.total_memory;
        if !total.is_power_of_two() || total < MIN_REGION_SIZE || total.trailing_zeros() > paddr_bits {
            return Err(ScenarioError::Layout(format!(
                "total memory {total:#x} must be a power of two between {MIN_REGION_SIZE} and 2^{paddr_bits} bytes"
            )));
        }
        let mut seen: Vec<(String, Region)> = Vec::new();
        let regions = std::iter::once(("security monitor".to_string(), self.sm_region))
            .chain(self.enclave_regions.iter().map(|(id, r)| (format!("enclave {id}"), *r)));
        for (name, region) in regions {
            Region::new(region.base, region.size)?;
            if region.end() > total {
                return Err(ScenarioError::Layout(format!(
                    "{name} region {region} extends past memory end {total:#x}"
                )));
            }
            if let Some((other, _)) = seen.iter().find(|(_, r)| r.overlaps_region(region)) {
                return Err(ScenarioError::Layout(format!("{name} region {region} overlaps {other}")));
            }
            seen.push((name, region));
        }
        Ok(())
    }

    /// All memory, as one region.
    pub fn memory(&self) -> Region {
        Region { base: 0, size: self.total_memory }
    }
}
