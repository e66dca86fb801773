//! Experiment drivers shared by the command-line tool and the test suites.
//!
//! Drivers return their output documents in memory. Nothing time-dependent
//! is ever written into them, so two runs with the same configuration and
//! seed produce identical bytes.

pub mod config;
pub mod gap;
pub mod planted;
pub mod switching;
pub mod tools;
pub mod verify;
pub mod zoo;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "paraac-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One emitted document, named relative to the output location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

/// Documents plus the assertions that failed and non-fatal warnings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOutput {
    pub files: Vec<OutputFile>,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Hex SHA-256 of the compact JSON serialization of `config`.
pub fn config_hash(config: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(config).expect("configs serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Serialize)]
struct Header<'a> {
    tool: &'a str,
    version: &'a str,
    config_hash: String,
    seed: u64,
}

/// The provenance object written at the top of every output.
pub fn header_value(config: &impl Serialize, seed: u64) -> serde_json::Value {
    serde_json::to_value(Header {
        tool: TOOL,
        version: VERSION,
        config_hash: config_hash(config),
        seed,
    })
    .expect("header serializes")
}

/// `# {..}` line for line-oriented formats (CSV, edge lists).
pub fn header_line(config: &impl Serialize, seed: u64) -> String {
    format!("# {}\n", header_value(config, seed))
}

/// JSON document with the header stored under `"header"`.
pub fn json_document(config: &impl Serialize, seed: u64, mut body: serde_json::Value) -> String {
    if let Some(map) = body.as_object_mut() {
        map.insert("header".into(), header_value(config, seed));
    }
    let mut s = serde_json::to_string_pretty(&body).expect("document serializes");
    s.push('\n');
    s
}

/// `⌈x⌉`, treating values within `1e-9` (relative) above an integer as that
/// integer.
pub(crate) fn ceil_tol(x: f64) -> u64 {
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0) as u64
}

/// `⌊x⌋`, treating values within `1e-9` (relative) below an integer as that
/// integer.
pub(crate) fn floor_tol(x: f64) -> i64 {
    (x + 1e-9 * x.abs().max(1.0)).floor() as i64
}
