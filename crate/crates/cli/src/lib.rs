//! Library side of the `qcycle` binary: configuration, dispatch and output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use thiserror::Error;

use config::{CommandKind, RunConfig};
use output::OutputSet;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Verification(String),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io {
            path: path.to_path_buf(),
            msg: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) | CliError::Io { .. } => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Verification(_) => "verification",
            CliError::Io { .. } => "io",
        }
    }

    /// Single-line JSON object, suitable for machine parsing from stderr.
    pub fn to_line(&self) -> String {
        json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

impl From<qcycle::Error> for CliError {
    fn from(e: qcycle::Error) -> Self {
        use qcycle::Error as E;
        match e {
            E::InvalidDrive(_) | E::UnsupportedProtocol(_) | E::Domain { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Runs a resolved configuration and writes its files into `cfg.out`:
/// the trajectory CSVs, a deterministic `summary.json`, and `timing.json`
/// with the wall-clock time. Returns the written paths.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let started = Instant::now();
    let report = commands::execute(cfg)?;
    let mut out = OutputSet::new(&cfg.out)?;
    for (name, lines) in &report.files {
        out.write_lines(name, lines)?;
    }
    out.write_json(
        "summary.json",
        &json!({ "config": cfg, "results": report.results }),
    )?;
    out.write_json(
        "timing.json",
        &json!({ "wall_clock_seconds": started.elapsed().as_secs_f64() }),
    )?;
    if !report.passed {
        // verification output is kept so the failing checks can be inspected
        out.commit();
        return Err(CliError::Verification(
            "one or more verification checks failed".into(),
        ));
    }
    Ok(out.commit())
}

pub fn resolve(command: CommandKind, flags: config::Flags) -> Result<RunConfig, CliError> {
    RunConfig::resolve(command, flags)
}
