//! The proof certificate: an ordered record of checked steps.
//!
//! Every real number is rendered as a decimal with a direction marker:
//! `>=` values are rounded down from a certified lower endpoint, `<=` values
//! rounded up from an upper endpoint, `=` values are exact integers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::reals::Interval;

/// Significant digits in certificate decimals.
pub const DIGITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Reserved for the analytic non-vanishing facts.
    Assumed,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Assumed => "ASSUMED",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub name: String,
    /// One of `>=`, `<=`, `=`.
    pub direction: String,
    pub decimal: String,
}

impl Value {
    pub fn lower(name: &str, x: &Interval) -> Self {
        Value { name: name.into(), direction: ">=".into(), decimal: x.lower_decimal(DIGITS) }
    }

    pub fn upper(name: &str, x: &Interval) -> Self {
        Value { name: name.into(), direction: "<=".into(), decimal: x.upper_decimal(DIGITS) }
    }

    pub fn exact(name: &str, x: impl std::fmt::Display) -> Self {
        Value { name: name.into(), direction: "=".into(), decimal: x.to_string() }
    }

    /// Both endpoints, as `name >= lo` and `name <= hi`.
    pub fn enclosure(name: &str, x: &Interval) -> Vec<Self> {
        vec![Value::lower(name, x), Value::upper(name, x)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub step_id: String,
    pub description: String,
    pub inputs: BTreeMap<String, String>,
    pub computed_values: Vec<Value>,
    pub claim: String,
    pub verdict: Verdict,
    /// Remarks, e.g. a published figure that the replay does not reproduce.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Step {
    pub fn new(step_id: &str, description: &str, claim: &str) -> Self {
        Step {
            step_id: step_id.into(),
            description: description.into(),
            inputs: BTreeMap::new(),
            computed_values: Vec::new(),
            claim: claim.into(),
            verdict: Verdict::Fail,
            note: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn value(mut self, v: Value) -> Self {
        self.computed_values.push(v);
        self
    }

    pub fn values(mut self, vs: impl IntoIterator<Item = Value>) -> Self {
        self.computed_values.extend(vs);
        self
    }

    pub fn exact(self, name: &str, x: &BigInt) -> Self {
        self.value(Value::exact(name, x))
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    pub fn passes(self, ok: bool) -> Self {
        self.verdict(Verdict::from_bool(ok))
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionRecord {
    pub step_id: String,
    pub bits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub toolkit_version: String,
    /// Unix seconds; the only field allowed to differ between runs.
    pub timestamp: u64,
    pub stages: Vec<String>,
    pub steps: Vec<Step>,
    pub precision_trace: Vec<PrecisionRecord>,
    /// Step ids the selected stages must cover.
    pub schema: Vec<String>,
    pub overall: Verdict,
}

impl Certificate {
    pub fn new(stages: Vec<String>, schema: Vec<String>) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Certificate {
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            stages,
            steps: Vec::new(),
            precision_trace: Vec::new(),
            schema,
            overall: Verdict::Fail,
        }
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
        self.overall = self.compute_overall();
    }

    pub fn record_precision(&mut self, step_id: &str, bits: u32) {
        self.precision_trace.push(PrecisionRecord { step_id: step_id.into(), bits });
    }

    pub fn step(&self, id: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.step_id == id)
    }

    /// Schema ids with no recorded step.
    pub fn missing_steps(&self) -> Vec<&str> {
        self.schema.iter().filter(|id| self.step(id).is_none()).map(|s| s.as_str()).collect()
    }

    pub fn failures(&self) -> Vec<&Step> {
        self.steps.iter().filter(|s| s.verdict == Verdict::Fail).collect()
    }

    /// PASS iff no step failed and the schema is covered.
    pub fn compute_overall(&self) -> Verdict {
        Verdict::from_bool(self.failures().is_empty() && self.missing_steps().is_empty())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Line-oriented rendering carrying the same content as the JSON.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "certificate fibclose {}", self.toolkit_version);
        let _ = writeln!(out, "timestamp {}", self.timestamp);
        let _ = writeln!(out, "stages {}", self.stages.join(" "));
        for s in &self.steps {
            let _ = writeln!(out, "step {} {}", s.step_id, s.verdict);
            let _ = writeln!(out, "  description {}", s.description);
            for (k, v) in &s.inputs {
                let _ = writeln!(out, "  input {k} = {v}");
            }
            for v in &s.computed_values {
                let _ = writeln!(out, "  value {} {} {}", v.name, v.direction, v.decimal);
            }
            let _ = writeln!(out, "  claim {}", s.claim);
            if let Some(n) = &s.note {
                let _ = writeln!(out, "  note {n}");
            }
        }
        for p in &self.precision_trace {
            let _ = writeln!(out, "precision {} {}", p.step_id, p.bits);
        }
        let _ = writeln!(out, "overall {}", self.overall);
        out
    }

    /// Copy with the timestamp zeroed, for run-to-run comparison.
    pub fn without_timestamp(&self) -> Self {
        Certificate { timestamp: 0, ..self.clone() }
    }
}
