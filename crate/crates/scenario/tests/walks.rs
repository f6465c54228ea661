// SPDX-License-Identifier: Apache-2.0

use pmp_scenario::random_walk;

#[test]
fn random_walks_stay_isolated() {
    let mut applied = 0;
    for seed in 0..500 {
        let report = random_walk(seed, 50, 8);
        assert!(report.is_clean(), "seed {seed}: {report:?}");
        applied += report.applied;
    }
    assert!(applied > 2_000, "walks should mostly make progress, applied {applied}");
}

#[test]
fn walks_are_deterministic() {
    assert_eq!(random_walk(42, 50, 8), random_walk(42, 50, 8));
}
