// SPDX-License-Identifier: Apache-2.0

use pmp_props::{run_campaign, shrink, CampaignConfig, CheckerImpl, PropertyId};

#[test]
fn exhaustive_one_entry_holds_for_reference_checkers() {
    let cfg = CampaignConfig::exhaustive(6, 1);
    for checker in CheckerImpl::REFERENCE {
        let report = run_campaign(&cfg, checker).unwrap();
        assert_eq!(report.cases_run, 64 * 16 * 64 * 4 * 2);
        assert!(report.holds(), "{checker}: {:?}", report.violations.first());
        assert_eq!(report.differential_mismatches, 0);
        // Every property has non-vacuous cases in this space.
        for p in PropertyId::ALL {
            assert!(report.tally(p).held > 0, "{p} only vacuous");
        }
    }
}

#[test]
fn every_mutant_is_caught() {
    for mutant in CheckerImpl::MUTANTS {
        let one = run_campaign(&CampaignConfig::exhaustive(4, 1), mutant).unwrap();
        let two = run_campaign(&CampaignConfig::exhaustive(4, 2), mutant).unwrap();
        assert!(one.violation_count + two.violation_count > 0, "{mutant} survived");
    }
}

#[test]
fn priority_mutant_breaks_main_property_with_two_entries() {
    let report = run_campaign(&CampaignConfig::exhaustive(4, 2), CheckerImpl::PriorityReversed).unwrap();
    assert!(report.tally(PropertyId::MainLowEq3).violated > 0);
    let ce = report.violations.iter().find(|ce| ce.property == PropertyId::MainLowEq3).expect("recorded");
    assert_eq!(ce.replay(), ce.actual);
    let small = shrink(ce);
    assert_eq!(small.state.n_entries(), 2);
    assert!(small.still_violates());
    assert_eq!(shrink(&small), small);
}

#[test]
fn randomized_reports_are_deterministic() {
    let cfg = CampaignConfig::randomized(32, 8, 50_000, 42);
    let a = run_campaign(&cfg, CheckerImpl::Mask).unwrap();
    let b = run_campaign(&cfg, CheckerImpl::Mask).unwrap();
    assert_eq!(a, b);
    assert!(a.holds());
    assert_eq!(a.cases_run, 50_000);
    let other = run_campaign(&CampaignConfig::randomized(32, 8, 50_000, 43), CheckerImpl::Mask).unwrap();
    assert_ne!(a.tally(PropertyId::HighPrivEq5), other.tally(PropertyId::HighPrivEq5));
}

#[test]
fn violations_are_ordered_and_replayable() {
    let report = run_campaign(&CampaignConfig::randomized(16, 4, 20_000, 9), CheckerImpl::AlignmentIgnored).unwrap();
    assert!(!report.holds());
    assert!(!report.violations.is_empty());
    assert!(report.violations.windows(2).all(|w| w[0].case_index <= w[1].case_index));
    for ce in &report.violations {
        assert_eq!(ce.replay(), ce.actual);
        assert!(ce.still_violates());
    }
}
