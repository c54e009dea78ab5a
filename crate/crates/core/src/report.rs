//! Three-valued property verdicts with structured witnesses.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::budget::ResourceLimit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A counterexample or certificate: a kind tag plus named fields.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub kind: String,
    pub fields: BTreeMap<String, Value>,
}

impl Witness {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            fields: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.fields.get(key).and_then(Value::as_str)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn holds(property: impl Into<String>, certificate: Option<Witness>) -> Self {
        Self {
            property: property.into(),
            verdict: Verdict::Holds,
            witness: certificate,
            notes: Vec::new(),
        }
    }

    pub fn fails(property: impl Into<String>, witness: Witness) -> Self {
        Self {
            property: property.into(),
            verdict: Verdict::Fails,
            witness: Some(witness),
            notes: Vec::new(),
        }
    }

    pub fn unknown(property: impl Into<String>, witness: Option<Witness>) -> Self {
        Self {
            property: property.into(),
            verdict: Verdict::Unknown,
            witness,
            notes: Vec::new(),
        }
    }

    pub fn resource_limit(property: impl Into<String>, e: &ResourceLimit) -> Self {
        let w = Witness::new("resource_limit")
            .with("what", e.what.clone())
            .with("limit", e.limit);
        Self::unknown(property, Some(w))
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.verdict)?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}
