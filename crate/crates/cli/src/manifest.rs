use crate::error::CliError;
use anyhow::Context;
use fagc::FitReport;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct FitSummary {
    pub label: String,
    pub iterations: usize,
    pub converged: bool,
    pub best_residual: f64,
    pub best_iteration: usize,
}

impl FitSummary {
    pub fn new(label: &str, r: &FitReport) -> Self {
        Self {
            label: label.to_string(),
            iterations: r.iterations,
            converged: r.converged,
            best_residual: r.best_residual,
            best_iteration: r.best_iteration,
        }
    }
}

/// Record of one command run, written as JSON next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fit_reports: Vec<FitSummary>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub duration_seconds: f64,
}

pub struct ManifestBuilder {
    command: String,
    config: serde_json::Value,
    fit_reports: Vec<FitSummary>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            config,
            fit_reports: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn fit_report(&mut self, summary: FitSummary) {
        self.fit_reports.push(summary);
    }

    /// Hashes every recorded file and writes the manifest to `path`.
    pub fn write(self, path: &Path) -> Result<RunManifest, CliError> {
        let digest_all = |paths: &[PathBuf]| -> Result<Vec<FileDigest>, CliError> {
            paths.iter().map(|p| digest(p)).collect()
        };
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            config: self.config,
            fit_reports: self.fit_reports,
            inputs: digest_all(&self.inputs)?,
            outputs: digest_all(&self.outputs)?,
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.into()))?;
        std::fs::write(path, text + "\n")
            .with_context(|| format!("cannot write manifest {}", path.display()))
            .map_err(CliError::Io)?;
        Ok(manifest)
    }
}

pub fn digest(path: &Path) -> Result<FileDigest, CliError> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("cannot hash {}", path.display()))
        .map_err(CliError::Io)?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

/// `<output>.manifest.json` unless overridden.
pub fn default_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}
