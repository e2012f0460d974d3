//! Provenance stamped into every artifact: schema and code versions, the
//! seed, and a hash of the exact command configuration.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub format_version: u32,
    pub code_version: &'static str,
    pub seed: u64,
    pub config_sha256: String,
}

impl Meta {
    pub fn new<C: Serialize>(config: &C, seed: u64) -> Self {
        let canonical = serde_json::to_string(config).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        Meta {
            format_version: crate::formats::FORMAT_VERSION,
            code_version: env!("CARGO_PKG_VERSION"),
            seed,
            config_sha256: format!("{:x}", hasher.finalize()),
        }
    }
}

/// Writes pretty JSON to the path, or to stdout when no path is given.
pub fn emit_json<T: Serialize>(value: &T, path: Option<&std::path::Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}
