//! Serializable outcome of one diagnostic run, for batch reports.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

/// How a diagnostic run ended. `Fail` marks a violated internal check
/// (a residual past its gate, a count mismatch); `Capacity` marks an
/// enumeration or dimension budget refusal; `Error` is everything else
/// that stopped the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Capacity,
    Error,
}

/// One diagnostic, summarized: what ran, on which inputs, what came out,
/// and how far each residual sat from the gate it was judged against.
///
/// Maps are ordered and every collection is filled in a deterministic
/// order, so serializing the same record twice yields identical bytes.
/// `runtime_ms` is the one field expected to differ between otherwise
/// identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticRecord {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub values: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub runtime_ms: u64,
}

impl DiagnosticRecord {
    pub fn new(name: impl Into<String>, tolerance: f64) -> DiagnosticRecord {
        DiagnosticRecord {
            name: name.into(),
            inputs: BTreeMap::new(),
            verdict: Verdict::Pass,
            values: BTreeMap::new(),
            residuals: BTreeMap::new(),
            tolerance,
            runtime_ms: 0,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn value(&mut self, key: &str, value: impl Into<Value>) {
        self.values.insert(key.into(), value.into());
    }

    /// Record a residual and demote the verdict to `Fail` if it exceeds
    /// the gate. Informational residuals that should not gate the verdict
    /// go into `values` instead.
    pub fn gated_residual(&mut self, key: &str, residual: f64, gate: f64) {
        self.residuals.insert(key.into(), residual);
        if !(residual <= gate) {
            self.verdict = Verdict::Fail;
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
