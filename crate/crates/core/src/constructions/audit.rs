//! Step-by-step audit reports shared by the construction drivers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Pass,
    Fail,
    /// Not run in this configuration; never counts as a pass.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditStep {
    pub id: u32,
    pub name: String,
    pub status: StepStatus,
    pub witness: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub steps: Vec<AuditStep>,
}

impl AuditReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: u32, name: &str, pass: bool, witness: Value) {
        let status = if pass { StepStatus::Pass } else { StepStatus::Fail };
        self.steps.push(AuditStep { id, name: name.into(), status, witness });
    }

    /// Records an errored step as a failure with the error as witness.
    pub fn push_result(&mut self, id: u32, name: &str, r: Result<(bool, Value)>) {
        match r {
            Ok((pass, w)) => self.push(id, name, pass, w),
            Err(e) => self.push(id, name, false, serde_json::json!({ "error": e.to_string() })),
        }
    }

    pub fn skip(&mut self, id: u32, name: &str, reason: &str) {
        self.steps.push(AuditStep { id, name: name.into(), status: StepStatus::Skipped, witness: Value::String(reason.into()) });
    }

    /// Every recorded step passed; skipped steps do not.
    pub fn all_pass(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| s.status == StepStatus::Pass)
    }

    pub fn any_fail(&self) -> bool {
        self.steps.iter().any(|s| s.status == StepStatus::Fail)
    }

    pub fn first_failure(&self) -> Option<&AuditStep> {
        self.steps.iter().find(|s| s.status == StepStatus::Fail)
    }

    pub fn step(&self, id: u32) -> Option<&AuditStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// `Err(AuditFailure)` for the first failing step.
    pub fn into_result(self) -> Result<Self> {
        match self.first_failure() {
            Some(s) => Err(Error::AuditFailure(s.id, format!("{}: {}", s.name, s.witness))),
            None => Ok(self),
        }
    }

    /// One row per step: `id,name,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,name,status\n");
        for s in &self.steps {
            let status = serde_json::to_value(s.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", s.id, s.name, status));
        }
        out
    }
}
