use std::path::{Path, PathBuf};

use gauss_factor::{PhysicsConfig, Timing};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{PhysicsArg, StrategyArg};

/// Everything a command needs, with defaults and the config file resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub n: Option<u64>,
    pub m_max: u32,
    pub l: Option<u64>,
    pub m: Option<u64>,
    pub strategy: StrategyArg,
    pub l_min: u64,
    pub l_max: u64,
    pub threshold: f64,
    pub include_one: bool,
    pub factors: Option<Vec<u64>>,
    pub physics: PhysicsArg,
    pub physics_config: PhysicsConfig,
    pub timing: Timing,
    /// Schedule text for `schedule --from`, embedded so replays need no input file.
    pub schedule_source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Resolved,
    pub outputs: Vec<OutputRecord>,
    pub summary: Option<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `results.csv` → `results.csv.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
