// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use pmp_core::{AddrMode, Permissions, PmpCfg, PmpEntry, PmpState, Privilege, MAX_ENTRIES};

use crate::error::ScenarioError;
use crate::isolation::ProbeConfig;
use crate::layout::{MemoryLayout, Region};

/// Software running on the hart. Only the security monitor runs in M mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Actor {
    SecurityMonitor,
    Os,
    Enclave(u32),
}

impl Actor {
    pub const fn privilege(self) -> Privilege {
        match self {
            Actor::SecurityMonitor => Privilege::M,
            Actor::Os => Privilege::S,
            Actor::Enclave(_) => Privilege::U,
        }
    }
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::SecurityMonitor => f.write_str("security monitor"),
            Actor::Os => f.write_str("OS"),
            Actor::Enclave(id) => write!(f, "enclave {id}"),
        }
    }
}

/// How the OS entry is taken away while an enclave runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LastEntryInvalidation {
    /// Switch the entry's mode to OFF so it stops matching.
    #[default]
    Off,
    /// Keep the entry matching but clear its permission bits.
    ZeroPerms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub paddr_bits: u32,
    pub n_entries: usize,
    pub invalidation: LastEntryInvalidation,
    pub probes: ProbeConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            paddr_bits: pmp_core::DEFAULT_PADDR_BITS,
            n_entries: pmp_core::DEFAULT_N_ENTRIES,
            invalidation: LastEntryInvalidation::Off,
            probes: ProbeConfig::default(),
        }
    }
}

fn napot(region: Region, perms: Permissions) -> PmpEntry {
    PmpEntry::new(PmpCfg::new(AddrMode::Napot, perms, false), PmpEntry::napot_addr_reg(region.base, region.size))
}

/// The security monitor's view of the machine: PMP registers, memory
/// layout, who is running and which entry belongs to whom.
///
/// Entry 0 protects the monitor itself (no permissions, unlocked so M mode
/// keeps full access). The last entry gives the OS all of memory at the
/// lowest priority. Each live enclave owns one entry in between, with no
/// permissions except while it runs.
///
/// Every operation returns a new state and leaves `self` untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioState {
    pmp: PmpState,
    layout: MemoryLayout,
    running: Actor,
    entry_allocation: BTreeMap<usize, Actor>,
    /// The OS entry as it was before the running enclave was entered.
    saved_last: Option<PmpEntry>,
    config: ScenarioConfig,
}

impl ScenarioState {
    /// Programs the monitor and OS entries, then creates every enclave
    /// already present in `layout`, in id order.
    pub fn boot(layout: MemoryLayout, config: ScenarioConfig) -> Result<Self, ScenarioError> {
        if !(2..=MAX_ENTRIES).contains(&config.n_entries) {
            return Err(ScenarioError::InsufficientEntries(config.n_entries));
        }
        layout.validate(config.paddr_bits)?;
        let n = config.n_entries;
        let mut pmp = PmpState::disabled(config.paddr_bits, n)?;
        pmp = pmp.with_entry(0, napot(layout.sm_region, Permissions::NONE))?;
        pmp = pmp.with_entry(n - 1, napot(layout.memory(), Permissions::ALL))?;
        let enclaves = layout.enclave_regions.clone();
        let mut state = ScenarioState {
            pmp,
            layout: MemoryLayout { enclave_regions: BTreeMap::new(), ..layout },
            running: Actor::Os,
            entry_allocation: BTreeMap::from([(0, Actor::SecurityMonitor), (n - 1, Actor::Os)]),
            saved_last: None,
            config,
        };
        for (id, region) in enclaves {
            state = state.create_enclave(id, region)?;
        }
        Ok(state)
    }

    pub fn pmp(&self) -> &PmpState {
        &self.pmp
    }

    pub fn layout(&self) -> &MemoryLayout {
        &self.layout
    }

    pub fn running(&self) -> Actor {
        self.running
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn live_enclaves(&self) -> BTreeSet<u32> {
        self.layout.enclave_regions.keys().copied().collect()
    }

    pub fn entry_allocation(&self) -> &BTreeMap<usize, Actor> {
        &self.entry_allocation
    }

    pub fn enclave_entry(&self, id: u32) -> Option<usize> {
        self.entry_allocation.iter().find(|(_, owner)| **owner == Actor::Enclave(id)).map(|(i, _)| *i)
    }

    fn last_index(&self) -> usize {
        self.config.n_entries - 1
    }

    fn require_os(&self, op: &'static str) -> Result<(), ScenarioError> {
        if self.running != Actor::Os {
            return Err(ScenarioError::WrongActor { op, running: self.running });
        }
        Ok(())
    }

    /// Seals `region` for a new enclave in the lowest free entry.
    pub fn create_enclave(&self, id: u32, region: Region) -> Result<Self, ScenarioError> {
        self.require_os("create")?;
        if self.layout.enclave_regions.contains_key(&id) {
            return Err(ScenarioError::DuplicateEnclave(id));
        }
        let region = Region::new(region.base, region.size)?;
        let layout = self.layout.clone().with_enclave(id, region);
        if let Err(ScenarioError::Layout(msg)) = layout.validate(self.config.paddr_bits) {
            return Err(ScenarioError::Overlap(id, msg));
        }
        let index = (1..self.last_index())
            .find(|i| !self.entry_allocation.contains_key(i))
            .ok_or(ScenarioError::NoFreeEntry(id))?;
        let mut next = self.clone();
        next.pmp = self.pmp.with_entry(index, napot(region, Permissions::NONE))?;
        next.layout = layout;
        next.entry_allocation.insert(index, Actor::Enclave(id));
        Ok(next)
    }

    /// Context switch OS → enclave: open the enclave's entry and take the
    /// OS entry away.
    pub fn enter_enclave(&self, id: u32) -> Result<Self, ScenarioError> {
        self.require_os("enter")?;
        let index = self.enclave_entry(id).ok_or(ScenarioError::UnknownEnclave(id))?;
        let last = self.last_index();
        let os_entry = self.pmp.entries()[last];
        let revoked = match self.config.invalidation {
            LastEntryInvalidation::Off => PmpEntry::new(os_entry.cfg.with_mode(AddrMode::Off), os_entry.addr_reg),
            LastEntryInvalidation::ZeroPerms => {
                PmpEntry::new(os_entry.cfg.with_permissions(Permissions::NONE), os_entry.addr_reg)
            }
        };
        let enclave_entry = self.pmp.entries()[index];
        let mut next = self.clone();
        next.pmp = self
            .pmp
            .with_entry(
                index,
                PmpEntry::new(enclave_entry.cfg.with_permissions(Permissions::ALL), enclave_entry.addr_reg),
            )?
            .with_entry(last, revoked)?;
        next.saved_last = Some(os_entry);
        next.running = Actor::Enclave(id);
        Ok(next)
    }

    /// Context switch enclave → OS; exactly undoes [`Self::enter_enclave`].
    pub fn exit_enclave(&self) -> Result<Self, ScenarioError> {
        let Actor::Enclave(id) = self.running else {
            return Err(ScenarioError::WrongActor { op: "exit", running: self.running });
        };
        let index = self.enclave_entry(id).ok_or(ScenarioError::UnknownEnclave(id))?;
        let enclave_entry = self.pmp.entries()[index];
        let saved = self.saved_last.expect("an entered enclave saved the OS entry");
        let mut next = self.clone();
        next.pmp = self
            .pmp
            .with_entry(
                index,
                PmpEntry::new(enclave_entry.cfg.with_permissions(Permissions::NONE), enclave_entry.addr_reg),
            )?
            .with_entry(self.last_index(), saved)?;
        next.saved_last = None;
        next.running = Actor::Os;
        Ok(next)
    }

    /// Frees the enclave's entry; its memory falls back to the OS entry.
    pub fn destroy_enclave(&self, id: u32) -> Result<Self, ScenarioError> {
        if self.running == Actor::Enclave(id) {
            return Err(ScenarioError::WrongActor { op: "destroy", running: self.running });
        }
        self.require_os("destroy")?;
        let index = self.enclave_entry(id).ok_or(ScenarioError::UnknownEnclave(id))?;
        let mut next = self.clone();
        next.pmp = self.pmp.with_entry(index, PmpEntry::OFF)?;
        next.layout.enclave_regions.remove(&id);
        next.entry_allocation.remove(&index);
        Ok(next)
    }

    /// Overwrites one PMP entry behind the monitor's back. Only meant for
    /// building deliberately broken states.
    pub fn with_raw_entry(&self, index: usize, entry: PmpEntry) -> Result<Self, ScenarioError> {
        let mut next = self.clone();
        next.pmp = self.pmp.with_entry(index, entry)?;
        Ok(next)
    }
}
