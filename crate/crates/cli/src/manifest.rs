use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u64 = 1;

/// Record of one run, written next to its outputs so the run can be replayed.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: u64,
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    /// Milliseconds since the Unix epoch.
    pub started_ms: u128,
    pub finished_ms: u128,
    pub outputs: Vec<PathBuf>,
}

pub fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str, config: Value, seed: Option<u64>, started_ms: u128) -> Self {
        RunManifest {
            schema: SCHEMA,
            command: command.to_string(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            started_ms,
            finished_ms: started_ms,
            outputs: Vec::new(),
        }
    }

    pub fn write(mut self, path: &Path, outputs: Vec<PathBuf>) -> anyhow::Result<()> {
        self.finished_ms = now_ms();
        self.outputs = outputs;
        std::fs::write(path, serde_json::to_string_pretty(&self)? + "\n")?;
        Ok(())
    }
}

/// `out.json` → `out.json.manifest.json`.
pub fn beside(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}
