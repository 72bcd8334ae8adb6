//! Outcome of a single inequality check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One evaluated inequality: left side, right side with any unknown absolute
/// constant dropped, their ratio, and a verdict whose meaning is check
/// specific.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub n: Option<u32>,
    pub lhs: f64,
    pub rhs_without_constant: f64,
    pub ratio: f64,
    pub pass: bool,
    #[serde(default)]
    pub context: BTreeMap<String, Value>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs_without_constant: f64, pass: bool) -> Self {
        let ratio = if rhs_without_constant != 0.0 {
            lhs / rhs_without_constant
        } else {
            f64::NAN
        };
        Self {
            name: name.into(),
            n: None,
            lhs,
            rhs_without_constant,
            ratio,
            pass,
            context: BTreeMap::new(),
        }
    }

    pub fn with_order(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.context.insert(key.to_string(), value.into());
        self
    }

    /// Sets a numeric context entry; non-finite values become `null`.
    pub fn with_num(self, key: &str, value: f64) -> Self {
        let v = serde_json::Number::from_f64(value)
            .map(Value::Number)
            .unwrap_or(Value::Null);
        self.with(key, v)
    }
}
