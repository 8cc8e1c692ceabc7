use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// A single failed check, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub detail: String,
}

/// Outcome of a theorem or property verification.
///
/// `pass` is true exactly when no witnesses were recorded. `details` carries
/// auxiliary counts and values; it is a sorted map so serialized reports are
/// byte-stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub theorem: String,
    pub semiring: String,
    pub pass: bool,
    pub checks: usize,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(theorem: impl Into<String>, semiring: impl Into<String>) -> Self {
        Report {
            theorem: theorem.into(),
            semiring: semiring.into(),
            pass: true,
            checks: 0,
            witnesses: Vec::new(),
            details: Map::new(),
        }
    }

    /// Records one check; on failure a witness is stored.
    pub fn check(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok {
            self.fail(check, detail());
        }
        ok
    }

    pub fn fail(&mut self, check: &str, detail: impl Into<String>) {
        self.pass = false;
        self.witnesses.push(Witness {
            check: check.to_string(),
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    /// Folds another report's outcome into this one, prefixing its witnesses.
    pub fn absorb(&mut self, other: Report) {
        self.checks += other.checks;
        for w in other.witnesses {
            self.fail(&format!("{}/{}", other.theorem, w.check), w.detail);
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}
