//! JSON report envelope. Every report carries the resolved configuration
//! and a format-version string, and validates against
//! `schemas/adlab-report-v1.schema.json`.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::CliError;

pub const FORMAT_VERSION: &str = "adlab-report-v1";

pub fn envelope(command: &str, config: Value, result: Value) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "command": command,
        "config": config,
        "result": result,
    })
}

pub fn write_report(
    path: &Path,
    command: &str,
    config: Value,
    result: Value,
) -> Result<(), CliError> {
    let doc = envelope(command, config, result);
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Format(e.to_string()))?;
    fs::write(path, text + "\n").map_err(CliError::Io)
}
