// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::ValueEnum;
use serde::Serialize;

use pmp_core::{AccessRequest, Permissions, Privilege};
use pmp_props::CheckerImpl;

use crate::numbers::{build_state, parse_u64};
use crate::{print_json, Cli, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessType {
    R,
    W,
    X,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// pmpcfg bytes, one per entry; omit for a register file with no entries.
    #[arg(long, value_delimiter = ',', value_parser = parse_u64)]
    cfg: Vec<u64>,
    /// pmpaddr values, one per entry.
    #[arg(long, value_delimiter = ',', value_parser = parse_u64)]
    addr: Vec<u64>,
    /// Byte address of the access.
    #[arg(long, value_parser = parse_u64)]
    access: u64,
    /// Access width in bytes: 1, 2, 4 or 8.
    #[arg(long, default_value_t = 1, value_parser = parse_u64)]
    size: u64,
    /// Privilege mode: U, S or M.
    #[arg(long)]
    prv: Privilege,
    /// Access type whose grant decides the exit code.
    #[arg(long = "type", value_enum)]
    access_type: Option<AccessType>,
    /// Checker implementation.
    #[arg(long = "impl", default_value = "spec")]
    checker: CheckerImpl,
}

#[derive(Serialize)]
struct Decision {
    addr: u64,
    size: u64,
    prv: Privilege,
    checker: CheckerImpl,
    /// First entry whose region contains `addr`, if any.
    matched_entry: Option<usize>,
    perms: Permissions,
    #[serde(rename = "type")]
    access_type: Option<AccessType>,
    granted: Option<bool>,
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode> {
    let state = build_state(cli.paddr_bits, &args.cfg, &args.addr)?;
    if !args.size.is_power_of_two() || args.size > 8 {
        bail!("access size must be 1, 2, 4 or 8 bytes, got {}", args.size);
    }
    state.check_addr(args.access)?;
    let req = AccessRequest::new(args.access, args.size.trailing_zeros() as u8, args.prv)?;
    let perms = args.checker.check(&state, &req);
    let granted = args.access_type.map(|t| match t {
        AccessType::R => perms.r,
        AccessType::W => perms.w,
        AccessType::X => perms.x,
    });
    let decision = Decision {
        addr: args.access,
        size: args.size,
        prv: args.prv,
        checker: args.checker,
        matched_entry: state.highest_priority_match(args.access),
        perms,
        access_type: args.access_type,
        granted,
    };
    match cli.format {
        Format::Json => print_json(&decision)?,
        Format::Human => {
            let entry = decision.matched_entry.map_or("no matching entry".to_string(), |i| format!("entry {i}"));
            println!("{}-byte access at {:#x} in {} mode: {perms} ({entry})", args.size, args.access, args.prv);
            if let (Some(t), Some(g)) = (args.access_type, granted) {
                let t = format!("{t:?}").to_lowercase();
                println!("{t}: {}", if g { "granted" } else { "denied" });
            }
        }
    }
    Ok(if granted == Some(false) { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
