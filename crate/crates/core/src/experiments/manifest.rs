use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Provenance record written next to every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub version: String,
    pub tolerances: Value,
    pub metadata: Value,
    pub wall_ms: u128,
}

impl RunManifest {
    pub fn new(
        command: &str,
        params: Value,
        tolerances: Value,
        metadata: Value,
        wall_ms: u128,
    ) -> Self {
        Self {
            command: command.to_string(),
            params,
            version: crate::VERSION.to_string(),
            tolerances,
            metadata,
            wall_ms,
        }
    }

    /// `<out>.manifest.json`
    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        out.with_file_name(name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest is always serializable")
    }
}
