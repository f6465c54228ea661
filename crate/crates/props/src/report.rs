// SPDX-License-Identifier: Apache-2.0

use std::time::Duration;

use serde::{Deserialize, Serialize};

use pmp_core::{check_access_spec, AccessRequest, Permissions, PmpState};

use crate::campaign::CampaignMode;
use crate::checker::CheckerImpl;
use crate::property::{evaluate, Outcome, PropertyId};

/// Counterexamples kept verbatim per report; the total is always counted.
pub const MAX_RECORDED_VIOLATIONS: usize = 16;

/// A case on which `checker` broke `property`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterExample {
    pub property: PropertyId,
    pub checker: CheckerImpl,
    /// Position of the case in the campaign's enumeration order.
    pub case_index: u64,
    pub state: PmpState,
    pub request: AccessRequest,
    /// Reference output (`check_access_spec`).
    pub expected: Permissions,
    /// Output of the checker under test.
    pub actual: Permissions,
}

impl CounterExample {
    pub fn new(
        property: PropertyId,
        checker: CheckerImpl,
        case_index: u64,
        state: PmpState,
        request: AccessRequest,
    ) -> Self {
        CounterExample {
            property,
            checker,
            case_index,
            expected: check_access_spec(&state, &request),
            actual: checker.check(&state, &request),
            state,
            request,
        }
    }

    pub fn replay(&self) -> Permissions {
        self.checker.check(&self.state, &self.request)
    }

    pub fn still_violates(&self) -> bool {
        evaluate(self.property, &self.state, &self.request, self.replay()) == Outcome::Violated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub property: PropertyId,
    pub held: u64,
    pub vacuous: u64,
    pub violated: u64,
}

impl PropertyTally {
    fn empty(property: PropertyId) -> Self {
        PropertyTally { property, held: 0, vacuous: 0, violated: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignReport {
    pub checker: CheckerImpl,
    pub paddr_bits: u32,
    pub n_entries: usize,
    pub mode: CampaignMode,
    pub cap: Option<u64>,
    pub cases_run: u64,
    /// Cases where the checker under test disagreed with `check_access_spec`.
    pub differential_mismatches: u64,
    pub properties: Vec<PropertyTally>,
    pub violation_count: u64,
    pub violations: Vec<CounterExample>,
    /// Not serialized, so that reports from identical runs compare byte for byte.
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Equality ignores `wall_time`.
impl PartialEq for CampaignReport {
    fn eq(&self, other: &Self) -> bool {
        let key = |r: &CampaignReport| {
            (
                r.checker,
                r.paddr_bits,
                r.n_entries,
                r.mode,
                r.cap,
                r.cases_run,
                r.differential_mismatches,
                r.violation_count,
            )
        };
        key(self) == key(other) && self.properties == other.properties && self.violations == other.violations
    }
}

impl Eq for CampaignReport {}

impl CampaignReport {
    /// All five properties held on every case.
    pub fn holds(&self) -> bool {
        self.violation_count == 0
    }

    pub fn tally(&self, property: PropertyId) -> &PropertyTally {
        &self.properties[property.index()]
    }
}

/// Per-worker accumulator. `merge` is associative and commutative, so the
/// final report does not depend on how work was split.
#[derive(Debug, Clone)]
pub(crate) struct Tally {
    pub cases: u64,
    pub mismatches: u64,
    pub properties: [PropertyTally; 5],
    pub violation_count: u64,
    pub violations: Vec<CounterExample>,
}

impl Default for Tally {
    fn default() -> Self {
        Tally {
            cases: 0,
            mismatches: 0,
            properties: PropertyId::ALL.map(PropertyTally::empty),
            violation_count: 0,
            violations: Vec::new(),
        }
    }
}

impl Tally {
    pub fn run_case(&mut self, checker: CheckerImpl, state: &PmpState, req: &AccessRequest, case_index: u64) {
        let expected = check_access_spec(state, req);
        let actual = match checker {
            CheckerImpl::Spec => expected,
            other => other.check(state, req),
        };
        self.cases += 1;
        if actual != expected {
            self.mismatches += 1;
        }
        for p in PropertyId::ALL {
            let t = &mut self.properties[p.index()];
            match evaluate(p, state, req, actual) {
                Outcome::Held => t.held += 1,
                Outcome::Vacuous => t.vacuous += 1,
                Outcome::Violated => {
                    t.violated += 1;
                    self.violation_count += 1;
                    if self.violations.len() < MAX_RECORDED_VIOLATIONS {
                        self.violations.push(CounterExample {
                            property: p,
                            checker,
                            case_index,
                            state: *state,
                            request: *req,
                            expected,
                            actual,
                        });
                    }
                }
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.mismatches += other.mismatches;
        for (a, b) in self.properties.iter_mut().zip(other.properties) {
            a.held += b.held;
            a.vacuous += b.vacuous;
            a.violated += b.violated;
        }
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.violations.sort_by_key(|ce| (ce.case_index, ce.property));
        self.violations.truncate(MAX_RECORDED_VIOLATIONS);
        self
    }
}
