//! Experiment runner behind the `billiards` command-line tool.
//!
//! A run reads an [`ExperimentConfig`], computes one of the four experiments
//! and writes CSV tables plus a JSON summary into an output directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

pub mod commands;
pub mod config;
pub mod output;

pub use config::{parse_config, ConfigError, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Orbit,
    PhasePortrait,
    Melnikov,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Orbit => "orbit",
            Command::PhasePortrait => "phase-portrait",
            Command::Melnikov => "melnikov",
            Command::Verify => "verify",
        }
    }

    /// Stem shared by the files a command writes.
    pub fn stem(self) -> &'static str {
        match self {
            Command::Orbit => "orbit",
            Command::PhasePortrait => "phase_portrait",
            Command::Melnikov => "melnikov",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{operation}: {source}")]
    Module {
        operation: &'static str,
        #[source]
        source: billiards_core::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Module { .. } | RunError::Io { .. } => 1,
        }
    }

    /// Machine-readable description printed on stderr.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        match self {
            RunError::Config(e) => {
                obj.insert("status".into(), "config_error".into());
                if let Some(field) = e.field() {
                    obj.insert("field".into(), field.into());
                }
                if let Some(line) = e.line() {
                    obj.insert("line".into(), line.into());
                }
            }
            RunError::Module { operation, .. } => {
                obj.insert("status".into(), "error".into());
                obj.insert("operation".into(), (*operation).into());
            }
            RunError::Io { path, .. } => {
                obj.insert("status".into(), "error".into());
                obj.insert("operation".into(), "write_output".into());
                obj.insert("path".into(), path.display().to_string().into());
            }
        }
        obj.insert("message".into(), self.to_string().into());
        Value::Object(obj)
    }
}

/// Attach the name of the failing library operation to a core error.
pub(crate) trait Operation<T> {
    fn op(self, operation: &'static str) -> Result<T, RunError>;
}

impl<T> Operation<T> for billiards_core::Result<T> {
    fn op(self, operation: &'static str) -> Result<T, RunError> {
        self.map_err(|source| RunError::Module { operation, source })
    }
}

/// Printed on stdout after a successful run. The summary file holds the same
/// data minus the wall time, so that reruns stay byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub config: ExperimentConfig,
    pub status: &'static str,
    pub wall_time_seconds: f64,
    pub out_dir: String,
    pub files: Vec<String>,
    pub scalars: Map<String, Value>,
}

#[derive(Serialize)]
struct Summary<'a> {
    command: &'static str,
    config: &'a ExperimentConfig,
    files: &'a [String],
    scalars: &'a Map<String, Value>,
}

pub fn run(config: &ExperimentConfig, command: Command, out: &Path) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mut dir = output::OutputDir::create(out)?;
    let scalars = match command {
        Command::Orbit => commands::orbit(config, &mut dir)?,
        Command::PhasePortrait => commands::phase_portrait(config, &mut dir)?,
        Command::Melnikov => commands::melnikov(config, &mut dir)?,
        Command::Verify => commands::verify(config, &mut dir)?,
    };
    let summary_name = format!("{}_summary.json", command.stem());
    let mut files = dir.files().to_vec();
    files.push(summary_name.clone());
    dir.json(
        &summary_name,
        &Summary {
            command: command.name(),
            config,
            files: &files,
            scalars: &scalars,
        },
    )?;
    Ok(RunReport {
        command: command.name(),
        config: config.clone(),
        status: "ok",
        wall_time_seconds: start.elapsed().as_secs_f64(),
        out_dir: dir.root().display().to_string(),
        files,
        scalars,
    })
}
