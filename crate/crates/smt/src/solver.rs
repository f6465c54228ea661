// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::io;
use std::path::Path;
use std::process::Command;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverVerdict {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for SolverVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverVerdict::Sat => "sat",
            SolverVerdict::Unsat => "unsat",
            SolverVerdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("could not start solver `{solver}`: {source}")]
    Spawn { solver: String, source: io::Error },
    #[error("solver `{solver}` produced no verdict (exit status {status}): {stderr}")]
    NoVerdict { solver: String, status: String, stderr: String },
    #[error("solver `{solver}` printed unexpected output `{line}`")]
    UnexpectedOutput { solver: String, line: String },
}

/// Runs `solver <file>` and reads the verdict from the first non-empty line
/// of its standard output.
pub fn run_solver(solver: &Path, file: &Path) -> Result<SolverVerdict, SolverError> {
    let name = solver.display().to_string();
    let output = Command::new(solver)
        .arg(file)
        .output()
        .map_err(|source| SolverError::Spawn { solver: name.clone(), source })?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    let Some(line) = stdout.lines().map(str::trim).find(|l| !l.is_empty()) else {
        return Err(SolverError::NoVerdict {
            solver: name,
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    };
    match line {
        "sat" => Ok(SolverVerdict::Sat),
        "unsat" => Ok(SolverVerdict::Unsat),
        "unknown" => Ok(SolverVerdict::Unknown),
        other => Err(SolverError::UnexpectedOutput { solver: name, line: other.to_string() }),
    }
}
