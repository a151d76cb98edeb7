use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Engine counters reported alongside a solution. Keys serialize in sorted order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Stats(BTreeMap<String, Value>);

impl Stats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.0.insert(key.to_string(), value.into());
    }

    /// Adds `delta` to an integer counter, creating it at zero.
    pub fn add(&mut self, key: &str, delta: u64) {
        let cur = self.get_u64(key).unwrap_or(0);
        self.set(key, cur + delta);
    }

    /// Keeps the larger of the stored and given values.
    pub fn max(&mut self, key: &str, value: u64) {
        let cur = self.get_u64(key).unwrap_or(0);
        self.set(key, cur.max(value));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn get_u64(&self, key: &str) -> Option<u64> {
        self.0.get(key).and_then(Value::as_u64)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.0.get(key).and_then(Value::as_str)
    }

    pub fn merge(&mut self, other: Stats) {
        self.0.extend(other.0);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }
}
