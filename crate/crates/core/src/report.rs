//! Versioned JSON reports shared by the command-line tool and the acceptance suite.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    /// Euler windows, degree bounds and similar evidence behind the results.
    pub certificates: Value,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            results,
            certificates: Value::Object(Default::default()),
            passed: true,
        }
    }

    pub fn with_certificates(mut self, certificates: Value) -> Self {
        self.certificates = certificates;
        self
    }

    pub fn with_passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
