// SPDX-License-Identifier: Apache-2.0

//! Isolation sweep: probe the running actor's accesses with the reference
//! checker and report every grant that reaches memory the actor must not
//! touch.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use pmp_core::{check_access_spec, AccessRequest, Permissions};

use crate::layout::Region;
use crate::state::{Actor, ScenarioState};

/// Byte offsets probed on either side of every region boundary.
pub const BOUNDARY_OFFSETS: [u64; 5] = [0, 1, 2, 4, 8];

/// Probe-grid density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Uniform samples drawn inside each region, and again across all memory.
    pub uniform_samples: usize,
    /// Seed for the uniform samples; a fixed seed makes the sweep repeatable.
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { uniform_samples: 64, seed: 0 }
    }
}

/// One access that was granted but must not have been.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationViolation {
    pub actor: Actor,
    pub addr: u64,
    pub size_exp: u8,
    pub granted: Permissions,
    /// The protected memory the access touched.
    pub reached: String,
}

impl fmt::Display for IsolationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} granted {} on {}-byte access at {:#x}, reaching {}",
            self.actor,
            self.granted,
            1u64 << self.size_exp,
            self.addr,
            self.reached
        )
    }
}

fn probe_addresses(state: &ScenarioState) -> BTreeSet<u64> {
    let layout = state.layout();
    let max = state.pmp().max_addr();
    let regions: Vec<Region> = std::iter::once(layout.sm_region)
        .chain(layout.enclave_regions.values().copied())
        .chain(std::iter::once(layout.memory()))
        .collect();
    let mut addrs = BTreeSet::new();
    for r in &regions {
        for edge in [r.base, r.end()] {
            for d in BOUNDARY_OFFSETS {
                addrs.extend([edge.checked_sub(d), edge.checked_add(d)].into_iter().flatten().filter(|&a| a <= max));
            }
        }
    }
    let probes = state.config().probes;
    let mut rng = ChaCha8Rng::seed_from_u64(probes.seed);
    for r in regions.iter().chain(std::iter::once(&Region { base: 0, size: max + 1 })) {
        for _ in 0..probes.uniform_samples {
            addrs.insert(rng.gen_range(r.base..r.end()));
        }
    }
    addrs
}

/// Every violating probe for the running actor; empty iff none violates.
///
/// The OS must never be granted anything on the monitor's or a live
/// enclave's memory; a running enclave must never be granted anything that
/// reaches outside its own region. Each probe address is tried with every
/// access width, aligned down to that width. The monitor runs in M mode and
/// is not constrained.
pub fn check_isolation(state: &ScenarioState) -> Vec<IsolationViolation> {
    let actor = state.running();
    let layout = state.layout();
    // What an access of `len` bytes at `addr` must not reach, if anything.
    let reached = |addr: u64, len: u64| -> Option<String> {
        match actor {
            Actor::SecurityMonitor => None,
            Actor::Os => {
                if layout.sm_region.overlaps(addr, len) {
                    return Some(format!("security monitor memory {}", layout.sm_region));
                }
                layout
                    .enclave_regions
                    .iter()
                    .find(|(_, r)| r.overlaps(addr, len))
                    .map(|(id, r)| format!("enclave {id} memory {r}"))
            }
            Actor::Enclave(id) => {
                let own = layout.enclave_regions.get(&id).copied();
                match own {
                    Some(r) if r.covers(addr, len) => None,
                    _ => Some(format!("memory outside enclave {id}")),
                }
            }
        }
    };
    if actor == Actor::SecurityMonitor {
        return Vec::new();
    }
    let mut violations = Vec::new();
    for addr in probe_addresses(state) {
        for size_exp in 0..=3u8 {
            let len = 1u64 << size_exp;
            let aligned = addr & !(len - 1);
            let req = AccessRequest::new(aligned, size_exp, actor.privilege()).expect("size exponent in range");
            let granted = check_access_spec(state.pmp(), &req);
            if !granted.any() {
                continue;
            }
            if let Some(reached) = reached(aligned, len) {
                let v = IsolationViolation { actor, addr: aligned, size_exp, granted, reached };
                if !violations.contains(&v) {
                    violations.push(v);
                }
            }
        }
    }
    violations
}
