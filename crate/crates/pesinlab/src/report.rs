//! JSON run report.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::config::Config;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Measured quantity the check is about.
    pub value: Value,
    pub criterion: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        pass: bool,
        value: impl Into<Value>,
        criterion: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            pass,
            value: value.into(),
            criterion: criterion.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub name: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_index: Option<i64>,
}

impl From<&pesinlab_core::Error> for ErrorReport {
    fn from(e: &pesinlab_core::Error) -> Self {
        Self {
            name: e.name().to_string(),
            message: e.to_string(),
            orbit_index: e.orbit_index(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub status: Status,
    pub config: Config,
    pub checks: Vec<Check>,
    pub results: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    pub threads: usize,
    pub duration_seconds: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Error => 1,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
