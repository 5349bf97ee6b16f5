use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "UNKNOWN",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub summary: String,
}

/// Data that lets a failure be replayed: a counter-model, a matrix, a probe
/// with the objects it was evaluated at, or an equation instance.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub check: String,
    pub kind: String,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub path: String,
    /// Hash of the file as read.
    pub sha256: String,
    /// Hash of the canonical text of the file with its imports spliced in.
    pub document_sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub load_ms: f64,
    pub run_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: Option<Input>,
    pub selection: BTreeMap<String, String>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Witness>,
    pub facts: Vec<Fact>,
    pub error: Option<String>,
    pub timings: Option<Timings>,
    pub exit_code: i32,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            input: None,
            selection: BTreeMap::new(),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            facts: Vec::new(),
            error: None,
            timings: None,
            exit_code: EXIT_PASS,
        }
    }

    pub fn select(&mut self, key: &str, value: impl Into<String>) {
        self.selection.insert(key.to_string(), value.into());
    }

    pub fn verdict(&mut self, check: impl Into<String>, status: Status, summary: impl Into<String>) {
        self.verdicts.push(Verdict {
            check: check.into(),
            status,
            summary: summary.into(),
        });
    }

    pub fn pass_if(&mut self, check: impl Into<String>, ok: bool, summary: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.verdict(check, status, summary);
    }

    pub fn witness(&mut self, check: impl Into<String>, kind: &str, data: impl Serialize) {
        self.witnesses.push(Witness {
            check: check.into(),
            kind: kind.to_string(),
            data: serde_json::to_value(data).unwrap_or(Value::Null),
        });
    }

    pub fn fact(&mut self, name: &str, value: impl Serialize) {
        self.facts.push(Fact {
            name: name.to_string(),
            value: serde_json::to_value(value).unwrap_or(Value::Null),
        });
    }

    /// Exit code from the verdicts: any failure wins over anything
    /// inconclusive, and an input error over both.
    pub fn finish(&mut self) {
        self.exit_code = if self.error.is_some() {
            EXIT_INPUT
        } else if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            EXIT_FAIL
        } else if self.verdicts.iter().any(|v| v.status == Status::Inconclusive) {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_PASS
        };
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(i) = &self.input {
            let _ = writeln!(out, "input: {} (sha256 {})", i.path, &i.sha256[..16]);
        }
        if !self.selection.is_empty() {
            let sel: Vec<String> = self.selection.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "selection: {}", sel.join(" "));
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "{:<7} {}: {}", v.status.label(), v.check, v.summary);
            for w in self.witnesses.iter().filter(|w| w.check == v.check) {
                let _ = writeln!(out, "        witness ({}): {}", w.kind, compact(&w.data));
            }
        }
        for f in &self.facts {
            let _ = writeln!(out, "{}: {}", f.name, compact(&f.value));
        }
        if let Some(t) = &self.timings {
            let _ = writeln!(out, "timings: load {:.1} ms, run {:.1} ms", t.load_ms, t.run_ms);
        }
        let _ = writeln!(out, "exit: {}", self.exit_code);
        out
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
