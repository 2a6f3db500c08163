//! Machine-readable run report.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauInfo {
    pub value: String,
    pub overridden: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Rendered witnesses of failure; empty on success.
    pub witnesses: Vec<String>,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckResult>,
    pub timings_ms: BTreeMap<String, u128>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input: None,
            tau: None,
            seed: None,
            checks: Vec::new(),
            timings_ms: BTreeMap::new(),
            passed: true,
        }
    }

    /// Records a check; a failure without witnesses gets a generic one.
    pub fn push(&mut self, name: &str, ok: bool, mut witnesses: Vec<String>, details: impl Serialize) {
        if !ok && witnesses.is_empty() {
            witnesses.push(format!("{name} failed"));
        }
        self.passed &= ok;
        self.checks.push(CheckResult {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            witnesses: if ok { Vec::new() } else { witnesses },
            details: serde_json::to_value(details).expect("report details serialize"),
        });
    }

    pub fn time(&mut self, name: &str, ms: u128) {
        self.timings_ms.insert(name.to_string(), ms);
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
