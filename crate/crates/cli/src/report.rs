use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "cbswb-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Refuted,
    /// The search ended without a certificate; not a refutation.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Refuted
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Refuted | Verdict::Inconclusive => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub verdict: Verdict,
    /// Human-readable lines, in the order they are printed.
    pub summary: Vec<String>,
    pub data: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str, verdict: Verdict, summary: Vec<String>, data: Value) -> Report {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            verdict,
            summary,
            data,
            timing_ms: None,
        }
    }

    pub fn empty(command: &str) -> Report {
        Report::new(command, Verdict::Pass, Vec::new(), Value::Null)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        };
        let _ = writeln!(out, "{}: {verdict}", self.command);
        for line in &self.summary {
            let _ = writeln!(out, "  {line}");
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "  time: {t} ms");
        }
        out
    }
}
