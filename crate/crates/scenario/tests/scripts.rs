// SPDX-License-Identifier: Apache-2.0

use pmp_scenario::{parse_script, run_script, Trace};

fn script(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/scripts/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn run(name: &str) -> Trace {
    run_script(&parse_script(&script(name)).unwrap())
}

/// Regenerate with `UPDATE_GOLDEN=1 cargo test -p pmp-scenario --test scripts`.
#[test]
fn lifecycle_trace_matches_golden() {
    let trace = run("lifecycle.pmps");
    assert_eq!(trace.exit_code(), 0, "{trace:?}");
    assert_eq!(trace.steps.len(), 10);
    let json = serde_json::to_string_pretty(&trace).unwrap() + "\n";
    let path = format!("{}/tests/golden/lifecycle_trace.json", env!("CARGO_MANIFEST_DIR"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &json).unwrap();
    }
    assert_eq!(json, std::fs::read_to_string(&path).unwrap());
    let back: Trace = serde_json::from_str(&json).unwrap();
    assert_eq!(back, trace);
}

#[test]
fn corrupted_script_reports_violation() {
    let trace = run("corrupted.pmps");
    assert_eq!(trace.exit_code(), 1);
    assert!(trace.steps[..2].iter().all(|s| s.violations.is_empty()));
    assert!(!trace.steps[2].violations.is_empty());
    let back: Trace = serde_json::from_str(&serde_json::to_string(&trace).unwrap()).unwrap();
    assert_eq!(back, trace);
}

#[test]
fn unknown_enclave_is_a_step_error() {
    let trace = run("unknown_enclave.pmps");
    assert_eq!(trace.exit_code(), 2);
    assert_eq!(trace.error.unwrap().line, 2);
}
