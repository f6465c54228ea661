// SPDX-License-Identifier: Apache-2.0

//! Line-oriented scenario scripts.
//!
//! ```text
//! # comment
//! boot memory=0x10000 sm=0x0:0x1000 entries=8 paddr-bits=16
//! create 1 0x4000 0x1000      # id base size
//! enter 1
//! exit
//! destroy 1
//! check
//! raw 2 0x1f 0x17ff           # overwrite entry: index cfg addr_reg
//! ```
//!
//! `boot` also accepts `invalidate=off|zero-perms`, `samples=N`, `seed=N`
//! and any number of `enclave=ID@BASE:SIZE`. Integers are decimal or
//! `0x`-prefixed hex; `_` separators are allowed.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use pmp_core::{PmpEntry, PmpState};

use crate::isolation::{check_isolation, IsolationViolation};
use crate::layout::{MemoryLayout, Region};
use crate::state::{Actor, LastEntryInvalidation, ScenarioConfig, ScenarioState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Boot {
        layout: MemoryLayout,
        config: ScenarioConfig,
    },
    Create {
        id: u32,
        region: Region,
    },
    Enter {
        id: u32,
    },
    Exit,
    Destroy {
        id: u32,
    },
    Check,
    /// Overwrite one PMP entry directly, bypassing the monitor.
    Raw {
        index: usize,
        cfg: u8,
        addr_reg: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptLine {
    pub line: usize,
    pub text: String,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

fn parse_int<T: TryFrom<u64>>(s: &str) -> Result<T, String> {
    let clean = s.replace('_', "");
    let value = match clean.strip_prefix("0x").or_else(|| clean.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => clean.parse(),
    }
    .map_err(|_| format!("malformed integer `{s}`"))?;
    T::try_from(value).map_err(|_| format!("integer `{s}` out of range"))
}

/// `BASE:SIZE`.
fn parse_extent(s: &str) -> Result<Region, String> {
    let (base, size) = s.split_once(':').ok_or_else(|| format!("expected BASE:SIZE, found `{s}`"))?;
    Ok(Region { base: parse_int(base)?, size: parse_int(size)? })
}

fn parse_boot(args: &[&str]) -> Result<Command, String> {
    let mut memory = None;
    let mut sm = None;
    let mut layout_enclaves = Vec::new();
    let mut config = ScenarioConfig::default();
    for arg in args {
        let (key, value) = arg.split_once('=').ok_or_else(|| format!("expected key=value, found `{arg}`"))?;
        match key {
            "memory" => memory = Some(parse_int(value)?),
            "sm" => sm = Some(parse_extent(value)?),
            "entries" => config.n_entries = parse_int(value)?,
            "paddr-bits" => config.paddr_bits = parse_int(value)?,
            "samples" => config.probes.uniform_samples = parse_int(value)?,
            "seed" => config.probes.seed = parse_int(value)?,
            "invalidate" => {
                config.invalidation = match value {
                    "off" => LastEntryInvalidation::Off,
                    "zero-perms" => LastEntryInvalidation::ZeroPerms,
                    other => return Err(format!("unknown invalidation `{other}` (off | zero-perms)")),
                }
            }
            "enclave" => {
                let (id, extent) =
                    value.split_once('@').ok_or_else(|| format!("expected ID@BASE:SIZE, found `{value}`"))?;
                layout_enclaves.push((parse_int(id)?, parse_extent(extent)?));
            }
            other => return Err(format!("unknown boot option `{other}`")),
        }
    }
    let total_memory = memory.ok_or("boot needs memory=SIZE")?;
    let sm_region = sm.ok_or("boot needs sm=BASE:SIZE")?;
    let mut layout = MemoryLayout::new(sm_region, total_memory);
    for (id, region) in layout_enclaves {
        if layout.enclave_regions.insert(id, region).is_some() {
            return Err(format!("enclave {id} declared twice"));
        }
    }
    Ok(Command::Boot { layout, config })
}

fn parse_command(words: &[&str]) -> Result<Command, String> {
    let arity = |n: usize| {
        if words.len() - 1 == n {
            Ok(())
        } else {
            Err(format!("`{}` takes {n} argument(s), found {}", words[0], words.len() - 1))
        }
    };
    match words[0] {
        "boot" => parse_boot(&words[1..]),
        "create" => {
            arity(3)?;
            Ok(Command::Create {
                id: parse_int(words[1])?,
                region: Region { base: parse_int(words[2])?, size: parse_int(words[3])? },
            })
        }
        "enter" => {
            arity(1)?;
            Ok(Command::Enter { id: parse_int(words[1])? })
        }
        "exit" => arity(0).map(|()| Command::Exit),
        "destroy" => {
            arity(1)?;
            Ok(Command::Destroy { id: parse_int(words[1])? })
        }
        "check" => arity(0).map(|()| Command::Check),
        "raw" => {
            arity(3)?;
            Ok(Command::Raw { index: parse_int(words[1])?, cfg: parse_int(words[2])?, addr_reg: parse_int(words[3])? })
        }
        other => Err(format!("unknown command `{other}`")),
    }
}

/// Parses a whole script; the first malformed line aborts with its number.
pub fn parse_script(text: &str) -> Result<Vec<ScriptLine>, ScriptError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let command = parse_command(&words).map_err(|message| ScriptError { line, message })?;
        out.push(ScriptLine { line, text: body.to_string(), command });
    }
    Ok(out)
}

/// State and isolation result after one command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub line: usize,
    pub command: String,
    pub running: Actor,
    pub pmp: PmpState,
    pub violations: Vec<IsolationViolation>,
}

/// A command whose preconditions failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepError {
    pub line: usize,
    pub command: String,
    pub message: String,
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: `{}` failed: {}", self.line, self.command, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub violation_count: usize,
    /// Set when a command failed; replay stops there.
    pub error: Option<StepError>,
}

impl Trace {
    /// 0 when every check came back empty, 1 on any isolation violation,
    /// 2 when a step failed.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.violation_count > 0 {
            1
        } else {
            0
        }
    }
}

fn apply(state: Option<&ScenarioState>, command: &Command) -> Result<ScenarioState, String> {
    let current = || state.ok_or_else(|| "the script must boot first".to_string());
    let result = match command {
        Command::Boot { layout, config } => {
            if state.is_some() {
                return Err("already booted".to_string());
            }
            ScenarioState::boot(layout.clone(), *config)
        }
        Command::Create { id, region } => current()?.create_enclave(*id, *region),
        Command::Enter { id } => current()?.enter_enclave(*id),
        Command::Exit => current()?.exit_enclave(),
        Command::Destroy { id } => current()?.destroy_enclave(*id),
        Command::Check => Ok(current()?.clone()),
        Command::Raw { index, cfg, addr_reg } => current()?.with_raw_entry(*index, PmpEntry::from_raw(*cfg, *addr_reg)),
    };
    result.map_err(|e| e.to_string())
}

/// Replays `lines`, sweeping isolation after every command.
pub fn run_script(lines: &[ScriptLine]) -> Trace {
    let mut trace = Trace { steps: Vec::new(), violation_count: 0, error: None };
    let mut state: Option<ScenarioState> = None;
    for line in lines {
        match apply(state.as_ref(), &line.command) {
            Ok(next) => {
                let violations = check_isolation(&next);
                trace.violation_count += violations.len();
                trace.steps.push(TraceStep {
                    line: line.line,
                    command: line.text.clone(),
                    running: next.running(),
                    pmp: *next.pmp(),
                    violations,
                });
                state = Some(next);
            }
            Err(message) => {
                trace.error = Some(StepError { line: line.line, command: line.text.clone(), message });
                break;
            }
        }
    }
    trace
}
