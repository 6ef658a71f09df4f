use std::io::Write;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Common, Format};

/// Outcome of a subcommand, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotFound,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::NotFound | Status::Failed => 2,
        }
    }
}

pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub config: Value,
    pub conventions: Value,
    pub result: Value,
    /// Replaces the JSON body when `--format csv` is requested.
    pub csv: Option<String>,
}

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

impl Report {
    pub fn render(&self, common: &Common, started: Instant) -> Result<String, String> {
        match common.format {
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| format!("{} has no CSV output", self.command)),
            Format::Json => {
                let mut body = json!({
                    "command": self.command,
                    "library_version": LIBRARY_VERSION,
                    "status": self.status,
                    "config": self.config,
                    "conventions": self.conventions,
                    "result": self.result,
                });
                if !common.no_volatile {
                    let ts = SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0);
                    body["volatile"] = json!({
                        "timestamp_unix": ts,
                        "elapsed_ms": started.elapsed().as_millis() as u64,
                    });
                }
                Ok(serde_json::to_string_pretty(&body).expect("report serializes") + "\n")
            }
        }
    }
}

pub fn emit(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}
