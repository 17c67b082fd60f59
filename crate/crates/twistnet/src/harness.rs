//! Check outcomes, suites and reports.

use serde::Serialize;
use std::collections::BTreeMap;

/// Result of one verification: named measured values plus the list of
/// requirements that failed.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Outcome {
    pub values: BTreeMap<String, f64>,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&mut self, key: &str, v: f64) -> &mut Self {
        self.values.insert(key.into(), v);
        self
    }

    pub fn require(&mut self, ok: bool, what: &str) -> &mut Self {
        if !ok {
            self.failures.push(what.into());
        }
        self
    }

    /// Record `|got - want|` and require it below `tol`.
    pub fn close(&mut self, key: &str, got: f64, want: f64, tol: f64) -> &mut Self {
        self.value(key, got);
        self.require((got - want).abs() <= tol, &format!("{key} = {got}, expected {want}"))
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, prefix: &str, other: Outcome) -> &mut Self {
        for (k, v) in other.values {
            self.values.insert(format!("{prefix}.{k}"), v);
        }
        self.failures.extend(other.failures.into_iter().map(|f| format!("{prefix}: {f}")));
        self
    }
}
