//! Content-addressed files under the cache directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult, ErrorKind};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex sha256 of (command, params, tool version).
///
/// `params` is serialized through a `BTreeMap`-backed JSON object so key
/// order never changes the key.
pub fn cache_key(command: &str, params: &Value) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(params.to_string().as_bytes());
    h.update([0]);
    h.update(VERSION.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| {
        CliError::new(
            ErrorKind::Io,
            format!("cannot create cache dir {}: {e}", dir.display()),
        )
    })
}

/// `<cache_dir>/<command>-<key>.<ext>`
pub fn cache_path(dir: &Path, command: &str, params: &Value, ext: &str) -> PathBuf {
    dir.join(format!("{command}-{}.{ext}", cache_key(command, params)))
}
