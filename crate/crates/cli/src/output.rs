use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, residual: Option<Value>) -> Self {
        Check { name: name.into(), status: if passed { "pass" } else { "fail" }, residual }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// One JSON document per command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub mode: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl Report {
    pub fn new(command: &str, mode: &str, inputs: Value) -> Self {
        Report { command: command.into(), mode: mode.into(), inputs, result: Value::Null, checks: Vec::new(), csv: None }
    }

    pub fn result(mut self, v: impl Serialize) -> Self {
        self.result = serde_json::to_value(v).unwrap_or_else(|e| json!({ "serialization_error": e.to_string() }));
        self
    }

    pub fn check(mut self, c: Check) -> Self {
        self.checks.push(c);
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}
