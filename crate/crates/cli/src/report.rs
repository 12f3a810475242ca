//! Reports: one JSON document per run, rendered to text from the same value.

use serde::Serialize;
use serde_json::Value;

use crate::config::LabBounds;

/// Bumped on any incompatible change to the JSON layout.
pub const SCHEMA: &str = "ifslab-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    Inconclusive,
    Refuted,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Verified => "verified",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Refuted => "refuted",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub claim: String,
    pub outcome: Outcome,
    pub detail: Value,
}

impl Check {
    pub fn new(claim: impl Into<String>, outcome: Outcome, detail: impl Serialize) -> Self {
        Self {
            claim: claim.into(),
            outcome,
            detail: serde_json::to_value(detail).expect("report values serialize"),
        }
    }

    pub fn holds(claim: impl Into<String>, ok: bool, detail: impl Serialize) -> Self {
        let outcome = if ok {
            Outcome::Verified
        } else {
            Outcome::Refuted
        };
        Self::new(claim, outcome, detail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub config: String,
    pub bounds: LabBounds,
    pub strict: bool,
    /// The worst check outcome: refuted over inconclusive over verified.
    pub outcome: Outcome,
    pub warnings: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: Vec<String>, config: String, bounds: LabBounds, strict: bool) -> Self {
        Self {
            schema: SCHEMA,
            command,
            config,
            bounds,
            strict,
            outcome: Outcome::Verified,
            warnings: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.outcome = self.outcome.max(check.outcome);
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("ifslab {}\n", self.command.join(" ")));
        out.push_str(&format!("config: {}\n", self.config));
        let b = &self.bounds;
        out.push_str(&format!(
            "bounds: max-exceptions={} max-index={} samples={} neighborhoods={} n-max={} depth-max={} seed={}\n",
            b.max_exceptions, b.max_index, b.samples, b.neighborhoods, b.n_max, b.depth_max, b.seed
        ));
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!("\n[{}] {}\n", c.outcome.as_str(), c.claim));
            render(&c.detail, 1, &mut out);
        }
        out.push_str(&format!("\noutcome: {}\n", self.outcome.as_str()));
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(o) => {
            for (k, v) in o {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(v, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for item in a {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(item, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
