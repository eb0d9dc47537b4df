use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::io::to_canonical_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported, never fails the run.
    Info,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// The outcome of one command: echoed arguments, input digests, checks and a payload.
///
/// Invariant: the run passes iff no check has [`Status::Fail`]; both renderings
/// print the same status.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: Vec<String>,
    /// Input name → SHA-256 of its document text.
    pub inputs: BTreeMap<String, String>,
    pub checks: Vec<CheckLine>,
    pub data: BTreeMap<String, Value>,
    /// Wall-clock time; only the text rendering shows it.
    pub elapsed: Option<Duration>,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { command, ..Report::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(CheckLine { name: name.into(), status, detail: detail.into() });
    }

    pub fn info(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(CheckLine { name: name.into(), status: Status::Info, detail: detail.into() });
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.check(name, false, detail);
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    fn status_name(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    /// Canonical JSON; byte-identical for identical inputs.
    pub fn render_structured(&self) -> String {
        to_canonical_json(&json!({
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "data": self.data,
            "status": self.status_name(),
        }))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "doctrines {}", self.command.join(" "));
        for (name, digest) in &self.inputs {
            let _ = writeln!(out, "input {name} sha256:{digest}");
        }
        for c in &self.checks {
            if c.detail.is_empty() {
                let _ = writeln!(out, "{:<4}  {}", c.status.name(), c.name);
            } else {
                let _ = writeln!(out, "{:<4}  {}: {}", c.status.name(), c.name, c.detail);
            }
        }
        for (key, value) in &self.data {
            let text = match value {
                Value::String(s) => s.clone(),
                Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
                    serde_json::to_string(value).unwrap_or_default()
                }
                other => serde_json::to_string_pretty(other).unwrap_or_default(),
            };
            let _ = writeln!(out, "{key}: {text}");
        }
        let timing = self.elapsed.map(|d| format!(" ({} ms)", d.as_millis())).unwrap_or_default();
        let _ = writeln!(out, "result: {}{timing}", self.status_name());
        out
    }
}
