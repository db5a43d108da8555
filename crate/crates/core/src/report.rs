//! Check records shared by the verification suites.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verified property: `residual <= tolerance` means pass.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes iff the residual is finite and at most the tolerance.
    pub fn measured(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let ok = residual.is_finite() && residual <= tolerance;
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: if residual.is_finite() { residual } else { f64::MAX },
            tolerance,
            detail: None,
        }
    }

    /// Boolean property; residual 0 on success, 1 on failure.
    pub fn boolean(name: impl Into<String>, ok: bool) -> Self {
        Self::measured(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    /// A check that could not be evaluated.
    pub fn errored(name: impl Into<String>, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            residual: f64::MAX,
            tolerance,
            detail: Some(format!("error: {err}")),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
