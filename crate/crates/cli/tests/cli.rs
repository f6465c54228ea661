// SPDX-License-Identifier: Apache-2.0

//! End-to-end runs of the `pmpcheck` binary.

use std::path::Path;
use std::process::{Command, Output};

use pmp_props::CampaignReport;
use pmp_scenario::Trace;

fn pmpcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmpcheck")).args(args).env_remove("PMPCHECK_SOLVER").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn script(name: &str) -> String {
    format!("{}/../scenario/tests/scripts/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn decode_examples() {
    let out = pmpcheck(&["decode", "--cfg", "0x00", "--addr", "0x0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().nth(1).unwrap().contains("OFF"));

    let out = pmpcheck(&["decode", "--cfg", "0x1F", "--addr", "0x7", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let e = &v["entries"][0];
    assert_eq!(e["mode"], "NAPOT");
    assert_eq!(e["bounds"]["range"]["lo"], 0);
    assert_eq!(e["bounds"]["range"]["hi"], 0x3F);
    assert_eq!(e["perms"], "rwx");
    assert_eq!(e["locked"], false);

    assert_eq!(code(&pmpcheck(&["decode", "--cfg", "0x9F"])), 2);
    assert_eq!(code(&pmpcheck(&["decode", "--cfg", "0xZZ", "--addr", "0"])), 2);
    assert_eq!(code(&pmpcheck(&["decode", "--cfg", "0x1f,0x18", "--addr", "0x7"])), 2);
}

#[test]
fn check_examples() {
    // No entries: machine mode gets everything, user mode nothing.
    assert_eq!(code(&pmpcheck(&["check", "--access", "0x1000", "--prv", "M", "--type", "w"])), 0);
    assert_eq!(code(&pmpcheck(&["check", "--access", "0x1000", "--prv", "U", "--type", "r"])), 1);
    // 8-byte access straddling the top of a 64-byte region.
    let straddle = ["check", "--cfg", "0x1f", "--addr", "0x7", "--access", "0x3c", "--size", "8", "--prv", "U"];
    let out = pmpcheck(&[&straddle[..], &["--type", "r"]].concat());
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("---"));
    let inside =
        ["check", "--cfg", "0x1f", "--addr", "0x7", "--access", "0x38", "--size", "8", "--prv", "U", "--type", "x"];
    assert_eq!(code(&pmpcheck(&inside)), 0);
    // Without --type the decision is only printed.
    assert_eq!(code(&pmpcheck(&straddle)), 0);
    // Locked entry binds machine mode.
    let locked = ["check", "--cfg", "0x99", "--addr", "0x7", "--access", "0x0", "--prv", "M", "--type", "w"];
    assert_eq!(code(&pmpcheck(&locked)), 1);
    // Usage errors.
    assert_eq!(code(&pmpcheck(&["check", "--access", "0", "--prv", "H"])), 2);
    assert_eq!(code(&pmpcheck(&["check", "--access", "0", "--prv", "U", "--size", "3"])), 2);
    assert_eq!(code(&pmpcheck(&["check", "--access", "0x100", "--prv", "U", "--paddr-bits", "8"])), 2);
}

#[test]
fn verify_examples() {
    let out = pmpcheck(&["verify", "--exhaustive", "--paddr-bits", "6", "--entries", "1"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = pmpcheck(&["verify", "--exhaustive", "--paddr-bits", "32"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exhaustive"));
    assert_eq!(code(&pmpcheck(&["verify"])), 2);

    let args = ["verify", "--random", "--trials", "20000", "--seed", "42", "--format", "json"];
    let first = pmpcheck(&args);
    let second = pmpcheck(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let reports: Vec<CampaignReport> = serde_json::from_value(v["reports"].clone()).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.cases_run == 20_000 && r.holds()));
}

#[test]
fn verify_mutant_fails() {
    let out = pmpcheck(&["verify", "--exhaustive", "--paddr-bits", "4", "--entries", "1", "--impl", "lock-ignored"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("HighPrivEq5 counterexample"));
}

#[test]
fn emit_smt_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = pmpcheck(&["emit-smt", "--all", "--paddr-bits", "8", "--entries", "2", "--out", out_dir]);
    assert_eq!(code(&out), 0);
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    assert_eq!(files.len(), 5);
    for f in &files {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(pmp_smt::parse(&text).is_ok(), "{f:?}");
    }

    let out = pmpcheck(&["emit-smt", "--property", "Eq3", "--paddr-bits", "4", "--entries", "1", "--out", out_dir]);
    assert_eq!(code(&out), 0);
    let emitted = std::fs::read_to_string(dir.path().join("pmp_main_low_eq3_4b_1e.smt2")).unwrap();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../smt/tests/golden/pmp_main_low_eq3_4b_1e.smt2");
    assert_eq!(emitted, std::fs::read_to_string(golden).unwrap());

    assert_eq!(code(&pmpcheck(&["emit-smt", "--property", "Eq7", "--out", out_dir])), 2);
    let blocked = dir.path().join("file");
    std::fs::write(&blocked, "").unwrap();
    assert_eq!(code(&pmpcheck(&["emit-smt", "--all", "--out", blocked.to_str().unwrap()])), 2);
    let broken_solver = [
        "emit-smt",
        "--property",
        "Eq4",
        "--paddr-bits",
        "4",
        "--entries",
        "1",
        "--out",
        out_dir,
        "--solver",
        "/nonexistent/solver",
    ];
    assert_eq!(code(&pmpcheck(&broken_solver)), 2);
}

#[test]
fn scenario_examples() {
    let out = pmpcheck(&["scenario", &script("lifecycle.pmps"), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let trace: Trace = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(trace.steps.len(), 10);
    let golden = std::fs::read_to_string(format!(
        "{}/../scenario/tests/golden/lifecycle_trace.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    assert_eq!(trace, serde_json::from_str::<Trace>(&golden).unwrap());

    assert_eq!(code(&pmpcheck(&["scenario", &script("corrupted.pmps")])), 1);
    let out = pmpcheck(&["scenario", &script("unknown_enclave.pmps")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pmps");
    std::fs::write(&bad, "boot memory=0x100 sm=0:8\nteleport 3\n").unwrap();
    let out = pmpcheck(&["scenario", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&pmpcheck(&["scenario", "/nonexistent.pmps"])), 2);
}
