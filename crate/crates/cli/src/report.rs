//! Report records and their JSON and text renderings.

use std::fmt::Write as _;

use dirac_core::deform::StateRecord;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "truncation-unknown")]
    TruncationUnknown,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::TruncationUnknown => "truncation-unknown",
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn worst(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::TruncationUnknown, _) | (_, Status::TruncationUnknown) => Status::TruncationUnknown,
            _ => Status::Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

/// One named verdict with its supporting values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub values: Vec<Entry>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check { name: name.into(), status, values: Vec::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.values.push(Entry { key: key.into(), value: value.to_string() });
        self
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.push(Entry { key: key.into(), value: value.to_string() });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub spec: String,
    pub spec_digest: String,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: impl Into<String>, spec: &str, spec_digest: &str) -> Self {
        Report {
            command: command.into(),
            spec: spec.into(),
            spec_digest: spec_digest.into(),
            status: Status::Pass,
            checks: Vec::new(),
            state: None,
            timing_ms: None,
        }
    }

    pub fn add(&mut self, check: Check) {
        self.status = self.status.worst(check.status);
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail | Status::TruncationUnknown => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "spec: {} (sha256 {})", self.spec, self.spec_digest);
        for check in &self.checks {
            let _ = writeln!(out, "[{}] {}", check.status.label(), check.name);
            for Entry { key, value } in &check.values {
                let _ = writeln!(out, "    {key} = {value}");
            }
        }
        if let Some(state) = &self.state {
            let _ = writeln!(out, "state: order {} verified through {}", state.omegas.len(), state.residual_ok_to);
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {ms} ms");
        }
        let _ = writeln!(out, "status: {}", self.status.label());
        out
    }
}
