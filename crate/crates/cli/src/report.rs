//! Machine-readable suite reports.

use serde::{Deserialize, Serialize};

use crate::document::F17;

/// One failed case: enough to reproduce it from the seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureRecord {
    pub case: usize,
    pub case_seed: u64,
    pub operation: String,
    pub residual: F17,
    pub detail: String,
}

/// Deterministic suite outcome; only `timestamp` varies between runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passes: usize,
    /// Worst residual among passing cases.
    pub worst_residual: F17,
    pub dims: Vec<usize>,
    pub block_dims: Vec<Vec<usize>>,
    pub eps_eq: F17,
    pub eps_psd: F17,
    pub failures: Vec<FailureRecord>,
    pub timestamp: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.passes == self.cases
    }

    /// The report as JSON with the timestamp removed; byte-identical across
    /// reruns and across serial/parallel execution.
    pub fn deterministic_json(&self) -> String {
        let mut value: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(self).expect("report serializes"))
                .expect("report reparses");
        value.as_object_mut().expect("object").remove("timestamp");
        serde_json::to_string(&value).expect("stripped report serializes")
    }

    pub fn human_summary(&self) -> String {
        let mut out = format!(
            "suite {}: {}/{} passed, worst residual {:.3e}",
            self.suite, self.passes, self.cases, self.worst_residual.0
        );
        for f in self.failures.iter().take(10) {
            out.push_str(&format!(
                "\n  case {} (seed {}): {} residual {:.3e} {}",
                f.case, f.case_seed, f.operation, f.residual.0, f.detail
            ));
        }
        if self.failures.len() > 10 {
            out.push_str(&format!("\n  ... and {} more", self.failures.len() - 10));
        }
        out
    }
}
