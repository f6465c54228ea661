// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use anyhow::Result;
use serde::Serialize;

use pmp_core::{AddrMode, RegionBounds};

use crate::numbers::{build_state, parse_u64};
use crate::{print_json, Cli, Format};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// pmpcfg bytes, one per entry (comma-separated or repeated).
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_u64)]
    cfg: Vec<u64>,
    /// pmpaddr values, one per entry.
    #[arg(long, value_delimiter = ',', value_parser = parse_u64)]
    addr: Vec<u64>,
}

#[derive(Serialize)]
struct DecodedEntry {
    index: usize,
    cfg: u8,
    addr_reg: u64,
    mode: AddrMode,
    bounds: RegionBounds,
    perms: String,
    locked: bool,
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode> {
    let state = build_state(cli.paddr_bits, &args.cfg, &args.addr)?;
    let rows: Vec<DecodedEntry> = state
        .entries()
        .iter()
        .enumerate()
        .map(|(index, e)| DecodedEntry {
            index,
            cfg: e.cfg.encode(),
            addr_reg: e.addr_reg,
            mode: e.cfg.mode,
            bounds: state.region_bounds(index).expect("index in range"),
            perms: e.cfg.permissions().to_string(),
            locked: e.cfg.l,
        })
        .collect();
    match cli.format {
        Format::Json => print_json(&serde_json::json!({ "paddr_bits": cli.paddr_bits, "entries": rows }))?,
        Format::Human => {
            println!("{:<5} {:<6} {:<18} {:<6} {:<40} {:<5} lock", "entry", "cfg", "pmpaddr", "mode", "range", "perms");
            for r in &rows {
                let range = match r.bounds {
                    RegionBounds::Empty => "-".to_string(),
                    RegionBounds::Range { lo, hi } => format!("[{lo:#x}, {hi:#x}]"),
                };
                let lock = if r.locked { "locked" } else { "unlocked" };
                println!(
                    "{:<5} {:<6} {:<18} {:<6} {:<40} {:<5} {lock}",
                    r.index,
                    format!("{:#04x}", r.cfg),
                    format!("{:#x}", r.addr_reg),
                    r.mode.to_string(),
                    range,
                    r.perms
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
