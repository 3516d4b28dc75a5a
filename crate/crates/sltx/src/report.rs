//! The run report written to the diagnostic stream.
//!
//! Output files stay byte-identical across runs; everything that varies
//! (wall time) goes here instead.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::commands::Status;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub spec_digest: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
    pub verdicts: Vec<(String, &'static str)>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, spec_digest: &str) -> Self {
        Self {
            spec_digest: spec_digest.to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            outputs: Vec::new(),
            wall_time_s: 0.0,
            verdicts: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn verdicts(&mut self, v: &[(String, Status)]) {
        self.verdicts = v.iter().map(|(n, s)| (n.clone(), s.as_str())).collect();
    }

    /// One JSON line.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
