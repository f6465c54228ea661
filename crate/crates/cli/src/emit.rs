// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use serde::Serialize;

use pmp_props::{CheckerImpl, PropertyId};
use pmp_smt::{compile_property_negation_for, file_name, render, run_solver, SolverVerdict};

use crate::{print_json, Cli, Format};

#[derive(Debug, clap::Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["property", "all"])))]
pub struct Args {
    /// Property to encode, e.g. `Eq3`, `main_low_eq3` or `MainLowEq3`.
    #[arg(long)]
    property: Option<PropertyId>,
    /// Encode all five properties.
    #[arg(long)]
    all: bool,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Checker implementation to encode.
    #[arg(long, default_value = "mask")]
    checker: CheckerImpl,
}

#[derive(Serialize)]
struct Emitted {
    property: PropertyId,
    path: PathBuf,
    verdict: Option<String>,
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode> {
    let properties = match args.property {
        Some(p) => vec![p],
        None => PropertyId::ALL.to_vec(),
    };
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut emitted = Vec::new();
    let mut failed = false;
    for p in properties {
        let doc = compile_property_negation_for(p, args.checker, cli.paddr_bits, cli.entries)?;
        let path = args.out.join(file_name(p, args.checker, cli.paddr_bits, cli.entries));
        std::fs::write(&path, render(&doc)).with_context(|| format!("writing {}", path.display()))?;
        let verdict = match &cli.solver {
            Some(solver) => {
                let v = run_solver(solver, &path)?;
                failed |= v != SolverVerdict::Unsat;
                Some(v.to_string())
            }
            None => None,
        };
        if cli.format == Format::Human {
            match &verdict {
                Some(v) => println!("{}: {v}", path.display()),
                None => println!("wrote {}", path.display()),
            }
        }
        emitted.push(Emitted { property: p, path, verdict });
    }
    if cli.format == Format::Json {
        print_json(&serde_json::json!({ "files": emitted }))?;
    }
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
