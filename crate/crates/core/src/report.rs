//! Machine-readable reports: schema-versioned, deterministic for fixed
//! inputs (keys sorted, timing excluded from JSON output).

use std::collections::BTreeMap;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub operation: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub outputs: BTreeMap<String, serde_json::Value>,
    pub verdicts: Vec<Verdict>,
    /// present only in human-facing output; omitted from JSON for
    /// byte-identical reports
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(operation: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            operation: operation.to_string(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            verdicts: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn set_output(&mut self, key: &str, value: impl Serialize) {
        self.outputs.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn verdict(&mut self, name: &str, pass: bool) {
        self.verdicts.push(Verdict { name: name.into(), pass, detail: None });
    }

    pub fn verdict_with(&mut self, name: &str, pass: bool, detail: String) {
        self.verdicts.push(Verdict { name: name.into(), pass, detail: Some(detail) });
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain table for terminal output.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.operation));
        for (k, v) in &self.inputs {
            out.push_str(&format!("  input  {k}: {v}\n"));
        }
        for (k, v) in &self.outputs {
            out.push_str(&format!("  output {k}: {v}\n"));
        }
        for v in &self.verdicts {
            let mark = if v.pass { "pass" } else { "FAIL" };
            match &v.detail {
                Some(d) => out.push_str(&format!("  [{mark}] {} ({d})\n", v.name)),
                None => out.push_str(&format!("  [{mark}] {}\n", v.name)),
            }
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("  ({t} ms)\n"));
        }
        out
    }
}
