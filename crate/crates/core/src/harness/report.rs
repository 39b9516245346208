use serde::Serialize;
use serde_json::Value;

/// Outcome of one check. `pass` holds exactly when `max_residual <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub params: Value,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: u64,
    pub seed: u64,
    pub pass: bool,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>, params: Value, max_residual: f64, tolerance: f64, samples: usize, seed: u64) -> Self {
        Self {
            check_name: check_name.into(),
            params,
            max_residual,
            tolerance,
            samples: samples as u64,
            seed,
            // NaN never passes.
            pass: max_residual <= tolerance,
            wall_time_ms: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub pass: bool,
}

impl SuiteSummary {
    pub fn of(suite: &str, reports: &[VerificationReport]) -> Self {
        let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.check_name.clone()).collect();
        Self {
            kind: "summary",
            suite: suite.to_string(),
            total: reports.len(),
            passed: reports.len() - failed.len(),
            pass: failed.is_empty(),
            failed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_the_residual() {
        assert!(VerificationReport::new("a", Value::Null, 1e-13, 1e-12, 1, 0).pass);
        assert!(!VerificationReport::new("a", Value::Null, 2e-12, 1e-12, 1, 0).pass);
        assert!(!VerificationReport::new("a", Value::Null, f64::NAN, 1e-12, 1, 0).pass);
    }
}
