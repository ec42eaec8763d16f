//! Deterministic file writers.

use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
}

/// Fixed `{:.16e}` formatting: 17 significant digits, round-trips exactly.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}
