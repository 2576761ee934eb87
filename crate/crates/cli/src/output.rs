//! Errors and artifact writing.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    Core(gscpcc::Error),
    Config(String),
    Usage(String),
    Io(String),
}

impl From<gscpcc::Error> for CliError {
    fn from(e: gscpcc::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Config(_) => "invalid_config",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Config(s) | CliError::Usage(s) | CliError::Io(s) => s.clone(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(_) => 1,
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.message() } }).to_string()
    }
}

/// One result set: CSV text plus its JSON mirror.
pub struct Artifact {
    pub command: &'static str,
    pub header: &'static str,
    pub lines: Vec<String>,
    pub rows: Value,
    pub config: Value,
    pub extra: Value,
}

impl Artifact {
    pub fn new<C: Serialize, R: Serialize>(command: &'static str, header: &'static str, config: &C, rows: &R) -> Self {
        Self {
            command,
            header,
            lines: Vec::new(),
            rows: serde_json::to_value(rows).unwrap_or(Value::Null),
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            extra: json!({}),
        }
    }

    pub fn with_extra(mut self, extra: Value) -> Self {
        self.extra = extra;
        self
    }

    pub fn csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.lines.len() + 1));
        s.push_str(self.header);
        s.push('\n');
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s
    }

    pub fn json(&self) -> String {
        let v = json!({
            "tool": "gscpcc",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "provenance": self.extra,
            "columns": self.header.split(',').collect::<Vec<_>>(),
            "rows": self.rows,
        });
        serde_json::to_string_pretty(&v).unwrap_or_default()
    }

    pub fn emit(&self, out: Option<&Path>, json_stdout: bool) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Io(e.to_string());
        if let Some(path) = out {
            std::fs::write(path, self.csv()).map_err(io)?;
            std::fs::write(path.with_extension("json"), self.json()).map_err(io)?;
        }
        if out.is_none() || json_stdout {
            let text = if json_stdout { self.json() + "\n" } else { self.csv() };
            std::io::stdout().lock().write_all(text.as_bytes()).map_err(io)?;
        }
        Ok(())
    }
}
