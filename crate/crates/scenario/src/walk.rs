// SPDX-License-Identifier: Apache-2.0

//! Random operation walks over the scenario state machine.

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pmp_core::RegionBounds;

use crate::isolation::{check_isolation, IsolationViolation, ProbeConfig};
use crate::layout::{MemoryLayout, Region};
use crate::state::{Actor, LastEntryInvalidation, ScenarioConfig, ScenarioState};

const WALK_PADDR_BITS: u32 = 16;
const MAX_ENCLAVE_ID: u32 = 8;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WalkReport {
    /// Operations that succeeded.
    pub applied: usize,
    /// Operations whose preconditions failed; the state stayed unchanged.
    pub rejected: usize,
    /// Isolation violations, with the step that produced them.
    pub violations: Vec<(usize, IsolationViolation)>,
    /// Structural invariants that failed, with the step.
    pub invariant_failures: Vec<(usize, String)>,
}

impl WalkReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.invariant_failures.is_empty()
    }
}

fn random_region<R: Rng>(rng: &mut R, total: u64, max_log: u32) -> Region {
    let size = 1u64 << rng.gen_range(3..=max_log);
    let base = rng.gen_range(0..total / size) * size;
    Region { base, size }
}

fn invariants(state: &ScenarioState, boot: &ScenarioState) -> Vec<String> {
    let mut failures = Vec::new();
    if state.pmp().entries()[0] != boot.pmp().entries()[0] {
        failures.push("entry 0 changed after boot".to_string());
    }
    let owners: Vec<Actor> = state.entry_allocation().values().copied().collect();
    for (i, a) in owners.iter().enumerate() {
        if owners[..i].contains(a) {
            failures.push(format!("{a} owns more than one entry"));
        }
    }
    for (id, region) in &state.layout().enclave_regions {
        let Some(index) = state.enclave_entry(*id) else {
            failures.push(format!("live enclave {id} owns no entry"));
            continue;
        };
        let expected = RegionBounds::Range { lo: region.base, hi: region.end() - 1 };
        if state.pmp().region_bounds(index) != Ok(expected) {
            failures.push(format!("enclave {id} entry {index} does not cover {region}"));
        }
    }
    failures
}

/// Boots a random layout and applies up to `max_len` random operations,
/// sweeping isolation and the structural invariants after every successful
/// one. Deterministic in `seed`.
pub fn random_walk(seed: u64, max_len: usize, uniform_samples: usize) -> WalkReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = 1u64 << WALK_PADDR_BITS;
    let config = ScenarioConfig {
        paddr_bits: WALK_PADDR_BITS,
        n_entries: rng.gen_range(2..=8),
        invalidation: if rng.gen_bool(0.5) { LastEntryInvalidation::Off } else { LastEntryInvalidation::ZeroPerms },
        probes: ProbeConfig { uniform_samples, seed },
    };
    let layout = MemoryLayout::new(random_region(&mut rng, total, 12), total);
    let boot = ScenarioState::boot(layout, config).expect("a single aligned region always boots");
    let mut report = WalkReport::default();
    let mut state = boot.clone();
    let mut before_enter: Option<ScenarioState> = None;
    let len = rng.gen_range(1..=max_len);
    for step in 0..len {
        let live = state.live_enclaves();
        let pick_id = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.8) {
                if let Some(id) = live.iter().copied().choose(rng) {
                    return id;
                }
            }
            rng.gen_range(0..MAX_ENCLAVE_ID)
        };
        let roll = rng.gen_range(0..100);
        let result = if roll < 35 {
            let id = rng.gen_range(0..MAX_ENCLAVE_ID);
            let region = random_region(&mut rng, total, 13);
            state.create_enclave(id, region)
        } else if roll < 60 {
            let id = pick_id(&mut rng);
            state.enter_enclave(id)
        } else if roll < 85 {
            state.exit_enclave()
        } else {
            let id = pick_id(&mut rng);
            state.destroy_enclave(id)
        };
        let Ok(next) = result else {
            report.rejected += 1;
            continue;
        };
        report.applied += 1;
        match (state.running(), next.running()) {
            (Actor::Os, Actor::Enclave(_)) => before_enter = Some(state.clone()),
            (Actor::Enclave(_), Actor::Os) if before_enter.take().as_ref() != Some(&next) => {
                report.invariant_failures.push((step, "exit did not restore the pre-enter state".to_string()));
            }
            _ => {}
        }
        report.invariant_failures.extend(invariants(&next, &boot).into_iter().map(|f| (step, f)));
        report.violations.extend(check_isolation(&next).into_iter().map(|v| (step, v)));
        state = next;
    }
    report
}
