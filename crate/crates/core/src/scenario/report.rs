//! Deterministic text and JSON renderings of command results.

use serde_json::{json, Value as Json};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub scenario: String,
    pub lines: Vec<String>,
    /// Structured results; object keys are emitted sorted.
    pub results: Json,
}

impl Report {
    pub fn new(command: &str, scenario: &str) -> Report {
        Report { command: command.to_string(), scenario: scenario.to_string(), lines: Vec::new(), results: json!({}) }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn text(&self) -> String {
        let mut out = format!("command: {}\nscenario: {}\nstatus: ok\n", self.command, self.scenario);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let v = json!({
            "command": self.command,
            "scenario": self.scenario,
            "status": "ok",
            "results": self.results,
        });
        pretty(&v)
    }
}

fn pretty(v: &Json) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Machine-readable error record, as text and JSON.
pub fn error_record(command: &str, e: &Error) -> (String, String) {
    let text = format!("command: {command}\nstatus: error\nerror: {} (exit {}): {e}\n", e.kind(), e.exit_code());
    let mut err = json!({ "kind": e.kind(), "code": e.exit_code(), "message": e.to_string() });
    if let Error::Parse { line, column, .. } | Error::UnknownReference { line, column, .. } = e {
        err["line"] = json!(line);
        err["column"] = json!(column);
    }
    let v = json!({ "command": command, "status": "error", "error": err });
    (text, pretty(&v))
}

pub fn list<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(", "))
}
