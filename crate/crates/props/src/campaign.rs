// SPDX-License-Identifier: Apache-2.0

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pmp_core::{AccessRequest, PmpEntry, PmpState, Privilege, MAX_ENTRIES};

use crate::checker::CheckerImpl;
use crate::error::CampaignError;
use crate::generate::{boundary_biased_addr, random_state};
use crate::report::{CampaignReport, Tally};

pub const EXHAUSTIVE_MAX_PADDR_BITS: u32 = 8;
pub const EXHAUSTIVE_MAX_ENTRIES: usize = 2;

/// cfg bytes with the reserved bits clear.
const CFG_VALUES: u64 = 64;
/// Exhaustive runs cover the low/high split: U stands in for every
/// non-machine mode.
const EXHAUSTIVE_PRIVILEGES: [Privilege; 2] = [Privilege::U, Privilege::M];
/// Stream seed for per-state sampling in capped exhaustive runs.
const SAMPLING_SEED: u64 = 0x5E_ED0F_A11C_A5E5;

const STATES_PER_CHUNK: u64 = 256;
const TRIALS_PER_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CampaignMode {
    /// Every register file; every address, size and privilege unless the
    /// cap forces per-state sampling.
    Exhaustive,
    Randomized {
        trials: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub paddr_bits: u32,
    pub n_entries: usize,
    pub mode: CampaignMode,
    /// Upper bound on cases for exhaustive runs. When the full cross-product
    /// is larger, every register file is still visited but only a
    /// boundary-biased sample of accesses is checked against each.
    pub cap: Option<u64>,
}

impl CampaignConfig {
    pub fn exhaustive(paddr_bits: u32, n_entries: usize) -> Self {
        CampaignConfig { paddr_bits, n_entries, mode: CampaignMode::Exhaustive, cap: None }
    }

    pub fn randomized(paddr_bits: u32, n_entries: usize, trials: u64, seed: u64) -> Self {
        CampaignConfig { paddr_bits, n_entries, mode: CampaignMode::Randomized { trials, seed }, cap: None }
    }

    pub fn with_cap(self, cap: u64) -> Self {
        CampaignConfig { cap: Some(cap), ..self }
    }

    /// Register files in the exhaustive space.
    pub fn state_count(&self) -> u64 {
        let per_entry = CFG_VALUES << (self.paddr_bits - 2);
        per_entry.pow(self.n_entries as u32)
    }

    /// Accesses per register file in the exhaustive space.
    pub fn requests_per_state(&self) -> u64 {
        (1u64 << self.paddr_bits) * 4 * EXHAUSTIVE_PRIVILEGES.len() as u64
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        PmpState::disabled(self.paddr_bits, self.n_entries)?;
        debug_assert!(self.n_entries <= MAX_ENTRIES);
        match self.mode {
            CampaignMode::Exhaustive => {
                if self.paddr_bits > EXHAUSTIVE_MAX_PADDR_BITS || self.n_entries > EXHAUSTIVE_MAX_ENTRIES {
                    return Err(CampaignError::Intractable { paddr_bits: self.paddr_bits, n_entries: self.n_entries });
                }
                if let Some(cap) = self.cap {
                    let states = self.state_count();
                    if cap < states {
                        return Err(CampaignError::CapBelowStateSpace { cap, states });
                    }
                }
            }
            CampaignMode::Randomized { trials, .. } => {
                if trials == 0 {
                    return Err(CampaignError::NoTrials);
                }
            }
        }
        Ok(())
    }
}

/// Runs every property against `checker` over the configured space.
/// Results are deterministic for a given config.
pub fn run_campaign(cfg: &CampaignConfig, checker: CheckerImpl) -> Result<CampaignReport, CampaignError> {
    cfg.validate()?;
    let start = Instant::now();
    let tally = match cfg.mode {
        CampaignMode::Exhaustive => run_exhaustive(cfg, checker),
        CampaignMode::Randomized { trials, seed } => run_randomized(cfg, checker, trials, seed),
    };
    Ok(CampaignReport {
        checker,
        paddr_bits: cfg.paddr_bits,
        n_entries: cfg.n_entries,
        mode: cfg.mode,
        cap: cfg.cap,
        cases_run: tally.cases,
        differential_mismatches: tally.mismatches,
        properties: tally.properties.to_vec(),
        violation_count: tally.violation_count,
        violations: tally.violations,
        wall_time: start.elapsed(),
    })
}

/// Register file number `index` in mixed radix, entry 0 least significant.
fn state_at(cfg: &CampaignConfig, mut index: u64) -> PmpState {
    let per_entry = CFG_VALUES << (cfg.paddr_bits - 2);
    let entries = (0..cfg.n_entries).map(|_| {
        let combo = index % per_entry;
        index /= per_entry;
        let code = (combo % CFG_VALUES) as u8;
        let raw = (code & 0x1F) | (code & 0x20) << 2;
        PmpEntry::from_raw(raw, combo / CFG_VALUES)
    });
    PmpState::new(cfg.paddr_bits, entries).expect("enumerated entries are in range")
}

fn run_exhaustive(cfg: &CampaignConfig, checker: CheckerImpl) -> Tally {
    let states = cfg.state_count();
    let per_state = cfg.requests_per_state();
    // Sampled mode spreads the cap evenly; the first `extra` states get one more case.
    let budget = match cfg.cap {
        Some(cap) if cap < states * per_state => Some((cap / states, cap % states)),
        _ => None,
    };
    let chunks = states.div_ceil(STATES_PER_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut tally = Tally::default();
            let first = chunk * STATES_PER_CHUNK;
            for s in first..(first + STATES_PER_CHUNK).min(states) {
                let state = state_at(cfg, s);
                match budget {
                    None => enumerate_requests(&mut tally, checker, &state, s * per_state),
                    Some((base, extra)) => {
                        let n = base + u64::from(s < extra);
                        let offset = s * base + s.min(extra);
                        sample_requests(&mut tally, checker, &state, s, n, offset);
                    }
                }
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

fn enumerate_requests(tally: &mut Tally, checker: CheckerImpl, state: &PmpState, mut case: u64) {
    for addr in 0..=state.max_addr() {
        for size_exp in 0..4 {
            for prv in EXHAUSTIVE_PRIVILEGES {
                let req = AccessRequest { addr, size_exp, prv };
                tally.run_case(checker, state, &req, case);
                case += 1;
            }
        }
    }
}

fn sample_requests(
    tally: &mut Tally,
    checker: CheckerImpl,
    state: &PmpState,
    state_index: u64,
    count: u64,
    first_case: u64,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
    rng.set_stream(state_index);
    for case in first_case..first_case + count {
        let req = AccessRequest {
            addr: boundary_biased_addr(&mut rng, state),
            size_exp: rng.gen_range(0..4),
            prv: EXHAUSTIVE_PRIVILEGES[rng.gen_range(0..EXHAUSTIVE_PRIVILEGES.len())],
        };
        tally.run_case(checker, state, &req, case);
    }
}

fn run_randomized(cfg: &CampaignConfig, checker: CheckerImpl, trials: u64, seed: u64) -> Tally {
    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let mut tally = Tally::default();
            let first = chunk * TRIALS_PER_CHUNK;
            for case in first..(first + TRIALS_PER_CHUNK).min(trials) {
                let state = random_state(&mut rng, cfg.paddr_bits, cfg.n_entries);
                let req = AccessRequest {
                    addr: boundary_biased_addr(&mut rng, &state),
                    size_exp: rng.gen_range(0..4),
                    prv: Privilege::ALL[rng.gen_range(0..Privilege::ALL.len())],
                };
                tally.run_case(checker, &state, &req, case);
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}
