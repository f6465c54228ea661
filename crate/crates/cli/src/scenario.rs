// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};

use pmp_scenario::{parse_script, run_script};

use crate::{print_json, Cli, Format};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Scenario script to replay.
    script: PathBuf,
}

pub fn run(cli: &Cli, args: &Args) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.script).with_context(|| format!("reading {}", args.script.display()))?;
    let lines = parse_script(&text).with_context(|| format!("parsing {}", args.script.display()))?;
    let trace = run_script(&lines);
    match cli.format {
        Format::Json => print_json(&trace)?,
        Format::Human => {
            for step in &trace.steps {
                let status = if step.violations.is_empty() {
                    "isolated".to_string()
                } else {
                    format!("{} violation(s)", step.violations.len())
                };
                println!(
                    "line {:<4} {:<40} running {:<16} {status}",
                    step.line,
                    step.command,
                    step.running.to_string()
                );
                for v in step.violations.iter().take(5) {
                    println!("    {v}");
                }
                if step.violations.len() > 5 {
                    println!("    ... {} more", step.violations.len() - 5);
                }
            }
            if let Some(err) = &trace.error {
                println!("{err}");
            }
        }
    }
    if let Some(err) = &trace.error {
        eprintln!("error: {err}");
    }
    Ok(ExitCode::from(trace.exit_code() as u8))
}
