//! The reproducibility record written next to every output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::settings::Settings;
use crate::error::{Error, Result};

pub const FILE_NAME: &str = "manifest.toml";

#[derive(Debug, Clone, Serialize)]
pub struct GroupSizes {
    pub x: usize,
    pub y: usize,
}

/// Resolved configuration plus everything needed to audit a rerun.
/// Passing the file back via `--config` repeats the run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub started: String,
    pub finished: String,
    /// Files written by the run, relative to the output directory.
    pub outputs: Vec<String>,
    /// SHA-256 of every input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<GroupSizes>,
    pub config: Settings,
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl RunManifest {
    pub fn new(command: &str, config: Settings, started: String) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: config.seed.unwrap_or(0),
            started,
            finished: String::new(),
            outputs: Vec::new(),
            inputs: BTreeMap::new(),
            groups: None,
            config,
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        self.inputs.insert(path.display().to_string(), digest(path)?);
        Ok(())
    }

    pub fn write(mut self, dir: &Path) -> Result<()> {
        self.finished = now();
        let text = toml::to_string(&self).map_err(|e| Error::Config(format!("manifest: {e}")))?;
        let path = dir.join(FILE_NAME);
        std::fs::write(&path, text).map_err(|e| Error::io(path, e))
    }
}
