//! Report assembly and writing.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Every run emits a provenance block alongside its result so outputs are
/// self-describing and reruns are comparable byte for byte (no timestamps).
pub fn document<R: Serialize>(
    command: &str,
    parameters: serde_json::Value,
    result: &R,
) -> serde_json::Value {
    json!({
        "command": command,
        "provenance": {
            "tool": "ghz4",
            "version": env!("CARGO_PKG_VERSION"),
            "parameters": parameters,
        },
        "result": result,
    })
}

pub fn render_json(doc: &serde_json::Value) -> anyhow::Result<String> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    Ok(text)
}

/// CSV with `#`-prefixed provenance lines, then a header and rows.
pub fn render_csv(
    command: &str,
    parameters: &serde_json::Value,
    header: &str,
    rows: &[String],
) -> String {
    let mut text = String::new();
    text.push_str(&format!("# ghz4 {command} v{}\n", env!("CARGO_PKG_VERSION")));
    if let Some(map) = parameters.as_object() {
        for (key, value) in map {
            text.push_str(&format!("# {key}={value}\n"));
        }
    }
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    text
}

pub fn write_output(out: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .context("writing to stdout")?,
    }
    Ok(())
}
