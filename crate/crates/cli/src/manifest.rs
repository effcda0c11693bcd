//! Per-stage run manifests: config hash, seed, and digests of every input
//! and output file. No timestamps or directories, so reruns compare equal.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub stage: String,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| p.display().to_string())
}

fn digests(paths: &[PathBuf]) -> Result<BTreeMap<String, String>, CliError> {
    paths.iter().map(|p| Ok((file_name(p), file_digest(p)?))).collect()
}

impl Manifest {
    pub fn build(stage: &str, cfg: &PipelineConfig, inputs: &[PathBuf], outputs: &[PathBuf]) -> Result<Self, CliError> {
        Ok(Manifest {
            stage: stage.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            config_hash: sha256_hex(cfg.canonical().as_bytes()),
            seed: cfg.seed,
            inputs: digests(inputs)?,
            outputs: digests(outputs)?,
        })
    }

    /// Writes `<out_dir>/<stage>.manifest.json` and returns its path.
    pub fn write(&self, out_dir: &Path) -> Result<PathBuf, CliError> {
        let path = out_dir.join(format!("{}.manifest.json", self.stage));
        let mut text = serde_json::to_vec_pretty(self)?;
        text.push(b'\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}
