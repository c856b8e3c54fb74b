use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Everything a job produces. The machine form is the JSON serialization of
/// this struct; the text form prints the same fields, so neither says more
/// than the other.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub timing_ms: u128,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub guards: Vec<String>,
    pub status: String,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            timing_ms: 0,
            guards: Vec::new(),
            status: "ok".to_string(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.inputs {
            out.push_str(&format!("input {k}: {}\n", render(v)));
        }
        for (k, v) in &self.results {
            out.push_str(&format!("{k}: {}\n", render(v)));
        }
        for g in &self.guards {
            out.push_str(&format!("guard: {g}\n"));
        }
        out.push_str(&format!("timing: {} ms\n", self.timing_ms));
        out.push_str(&format!("status: {}\n", self.status));
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).unwrap_or_else(|_| other.to_string()),
    }
}
