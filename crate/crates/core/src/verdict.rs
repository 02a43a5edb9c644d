//! Pass/fail/skipped outcomes shared by the checking layers and the reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn from_bool(ok: bool) -> CheckStatus {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        self == CheckStatus::Fail
    }
}

/// One named check with its outcome and a JSON payload (witness, table, …).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, status: CheckStatus, witness: Value) -> Check {
        Check {
            name: name.into(),
            status,
            witness,
        }
    }

    pub fn pass(name: impl Into<String>) -> Check {
        Check::new(name, CheckStatus::Pass, Value::Null)
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Check {
        Check::new(name, CheckStatus::Skipped, Value::String(reason.into()))
    }
}
