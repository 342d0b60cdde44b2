//! Reproducibility record written next to every command's outputs.

use std::fs;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub version: String,
    pub sub_seeds: Vec<(String, u64)>,
    pub outputs: Vec<String>,
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    Sha256::digest(cfg.canonical().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl RunManifest {
    pub fn new(command: &str, cfg: &ExperimentConfig) -> Self {
        RunManifest {
            command: command.to_string(),
            config_hash: config_hash(cfg),
            version: TOOL_VERSION.to_string(),
            sub_seeds: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn seed(&mut self, name: impl Into<String>, value: u64) {
        self.sub_seeds.push((name.into(), value));
    }

    pub fn output(&mut self, file: impl Into<String>) {
        self.outputs.push(file.into());
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "command = {}\nversion = {}\nconfig_sha256 = {}\n",
            self.command, self.version, self.config_hash
        );
        for (name, v) in &self.sub_seeds {
            s.push_str(&format!("sub_seed {name} = {v}\n"));
        }
        for f in &self.outputs {
            s.push_str(&format!("output = {f}\n"));
        }
        s
    }

    /// Writes `<command>_manifest.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        fs::write(dir.join(format!("{}_manifest.txt", self.command)), self.render())
    }
}
