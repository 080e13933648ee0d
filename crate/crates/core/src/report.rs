//! Structured pass/fail records emitted by the verifiers.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One verdict. A failing verdict always carries a witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub check: String,
    pub m: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub context: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl VerdictReport {
    pub fn pass(check: impl Into<String>, m: usize) -> Self {
        Self {
            check: check.into(),
            m,
            status: Status::Pass,
            witness: None,
            context: Map::new(),
            wall_ms: None,
        }
    }

    pub fn fail(check: impl Into<String>, m: usize, witness: impl Into<String>) -> Self {
        Self {
            status: Status::Fail,
            witness: Some(witness.into()),
            ..Self::pass(check, m)
        }
    }

    pub fn skip(check: impl Into<String>, m: usize, reason: impl Into<String>) -> Self {
        Self {
            status: Status::Skip,
            witness: Some(reason.into()),
            ..Self::pass(check, m)
        }
    }

    /// Pass when `ok`, otherwise fail with the lazily built witness.
    pub fn from_check(
        check: impl Into<String>,
        m: usize,
        ok: bool,
        witness: impl FnOnce() -> String,
    ) -> Self {
        if ok {
            Self::pass(check, m)
        } else {
            Self::fail(check, m, witness())
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.context.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("verdicts serialize")
    }
}
