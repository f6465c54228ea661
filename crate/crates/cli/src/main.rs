// SPDX-License-Identifier: Apache-2.0

//! `pmpcheck`: decode PMP registers, check single accesses, run property
//! campaigns, emit SMT-LIB queries and replay enclave scenarios.
//!
//! Exit codes: 0 pass, 1 semantic failure (access denied, property
//! violated, solver found a counterexample, isolation broken), 2 usage or
//! runtime error.

mod check;
mod decode;
mod emit;
mod numbers;
mod scenario;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pmp_core::{DEFAULT_N_ENTRIES, DEFAULT_PADDR_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "pmpcheck", version, about = "Reference model and verification harness for the RISC-V PMP checker")]
pub struct Cli {
    /// Physical address width in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PADDR_BITS)]
    pub paddr_bits: u32,
    /// Number of PMP entries (campaigns and SMT emission).
    #[arg(long, global = true, default_value_t = DEFAULT_N_ENTRIES)]
    pub entries: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Seed for randomized campaigns.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// SMT solver executable invoked as `<solver> <file.smt2>`.
    #[arg(long, global = true, env = "PMPCHECK_SOLVER")]
    pub solver: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decode pmpcfg bytes and pmpaddr values into an entry table.
    Decode(decode::Args),
    /// Run one access through the checker.
    Check(check::Args),
    /// Run property campaigns over the checker implementations.
    Verify(verify::Args),
    /// Write SMT-LIB property-negation queries.
    EmitSmt(emit::Args),
    /// Replay an enclave scenario script.
    Scenario(scenario::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decode(args) => decode::run(&cli, args),
        Command::Check(args) => check::run(&cli, args),
        Command::Verify(args) => verify::run(&cli, args),
        Command::EmitSmt(args) => emit::run(&cli, args),
        Command::Scenario(args) => scenario::run(&cli, args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Pretty JSON on stdout.
pub fn print_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
