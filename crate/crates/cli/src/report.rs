use serde::Serialize;
use serde_json::Value;

/// Summary of one invocation, written to stderr as a single JSON line.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub inputs: Value,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
    pub events: Vec<String>,
    pub failures: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ToleranceFailure,
    Error,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            status: Status::Ok,
            exit_code: 0,
            inputs: Value::Null,
            outputs: Vec::new(),
            wall_time_s: 0.0,
            warnings: Vec::new(),
            events: Vec::new(),
            failures: Vec::new(),
            error: None,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
