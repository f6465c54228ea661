// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use anyhow::Result;
use serde::Serialize;

use pmp_props::{run_campaign, shrink, CampaignConfig, CampaignReport, CheckerImpl, PropertyId};

use crate::{print_json, Cli, Format};

#[derive(Debug, clap::Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["exhaustive", "random"])))]
pub struct Args {
    /// Enumerate every register file and access (small parameters only).
    #[arg(long)]
    exhaustive: bool,
    /// Sample random register files and accesses.
    #[arg(long)]
    random: bool,
    /// Number of randomized trials.
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// Case cap for exhaustive runs; switches to per-state sampling when the
    /// full space is larger.
    #[arg(long)]
    cap: Option<u64>,
    /// Implementation to verify (default: both reference checkers).
    #[arg(long = "impl")]
    checker: Option<CheckerImpl>,
}

#[derive(Serialize)]
struct Output<'a> {
    reports: &'a [CampaignReport],
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode> {
    let mut config = if args.exhaustive {
        CampaignConfig::exhaustive(cli.paddr_bits, cli.entries)
    } else {
        CampaignConfig::randomized(cli.paddr_bits, cli.entries, args.trials, cli.seed)
    };
    if let Some(cap) = args.cap {
        config = config.with_cap(cap);
    }
    let checkers = match args.checker {
        Some(c) => vec![c],
        None => CheckerImpl::REFERENCE.to_vec(),
    };
    let reports = checkers.iter().map(|&c| run_campaign(&config, c)).collect::<Result<Vec<_>, _>>()?;
    match cli.format {
        Format::Json => print_json(&Output { reports: &reports })?,
        Format::Human => print_human(&reports),
    }
    let clean = reports.iter().all(|r| r.holds() && r.differential_mismatches == 0);
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_human(reports: &[CampaignReport]) {
    for r in reports {
        let mode = match r.mode {
            pmp_props::CampaignMode::Exhaustive => match r.cap {
                Some(cap) => format!("exhaustive (cap {cap})"),
                None => "exhaustive".to_string(),
            },
            pmp_props::CampaignMode::Randomized { trials, seed } => {
                format!("randomized ({trials} trials, seed {seed})")
            }
        };
        println!(
            "{}: paddr_bits {}, entries {}, {mode}: {} cases in {:.2?}",
            r.checker, r.paddr_bits, r.n_entries, r.cases_run, r.wall_time
        );
        println!("  {:<18} {:>14} {:>14} {:>10}", "property", "held", "vacuous", "violated");
        for t in &r.properties {
            println!("  {:<18} {:>14} {:>14} {:>10}", t.property.name(), t.held, t.vacuous, t.violated);
        }
        println!("  differential mismatches against spec: {}", r.differential_mismatches);
        let verdict = if r.holds() { "all properties hold" } else { "VIOLATED" };
        println!("  {verdict}");
        for p in PropertyId::ALL {
            let Some(ce) = r.violations.iter().find(|v| v.property == p) else {
                continue;
            };
            let small = shrink(ce);
            println!(
                "  {} counterexample (case {}, shrunk to {} entries): {:?}, access {}-byte at {:#x} in {} mode, expected {}, got {}",
                p.name(),
                ce.case_index,
                small.state.n_entries(),
                small.state.entries(),
                small.request.bytes(),
                small.request.addr,
                small.request.prv,
                small.expected,
                small.actual
            );
        }
    }
}
