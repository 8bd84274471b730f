use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Counterexample or witness attached to a failed (occasionally a passed)
/// check. Indices refer to the event/point carrier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Point {
        point: usize,
    },
    Pair {
        p: usize,
        q: usize,
    },
    Triple {
        a: usize,
        b: usize,
        c: usize,
    },
    /// `point` has no admissible neighbourhood inside generator `generator`.
    Generator {
        point: usize,
        generator: usize,
    },
    /// Set `set` of the `direction` family is not open around `point` in the
    /// other family's topology; `outside` lists neighbourhood points it misses.
    Refinement {
        point: usize,
        set: usize,
        direction: String,
        outside: Vec<usize>,
    },
}

/// Structured verdict of a property check.
///
/// `timing_ms` is the only field that may differ between runs on identical
/// inputs; everything else is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, holds: bool) -> Self {
        CheckReport {
            name: name.into(),
            holds,
            witness: None,
            margin: None,
            details: BTreeMap::new(),
            notes: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn with_witness(mut self, witness: Option<Witness>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_margin(mut self, margin: Option<f64>) -> Self {
        self.margin = margin;
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Boolean detail flag, `false` when absent.
    pub fn flag(&self, key: &str) -> bool {
        self.details.get(key).and_then(Value::as_bool).unwrap_or(false)
    }
}

/// Note attached to every report whose way-below relation comes from cone
/// interiors rather than from the order-theoretic definition.
pub const CAUSAL_INTERIOR_CAVEAT: &str = "way-below evaluated as y ∈ int K+(x): on a finite \
carrier the definitional way-below coincides with the order itself, so the interior \
characterization is used and consistency between characterizations is what is checked";
