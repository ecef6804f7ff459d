//! The report document every command emits on standard output.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub command: &'static str,
    pub config: serde_json::Value,
    pub metrics: BTreeMap<String, f64>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl ReportDocument {
    pub fn new(command: &'static str, config: impl Serialize) -> Self {
        Self {
            command,
            config: serde_json::to_value(config).expect("config serializes"),
            metrics: BTreeMap::new(),
            pass: true,
            wall_time_s: 0.0,
        }
    }

    /// Record a metric; every value must be finite.
    pub fn metric(&mut self, name: &str, value: f64) {
        assert!(value.is_finite(), "metric {name} not finite: {value}");
        self.metrics.insert(name.to_string(), value);
    }

    /// Fold a named check into the pass flag.
    pub fn check(&mut self, name: &str, value: f64, below: f64) {
        self.metric(name, value);
        if value >= below {
            self.pass = false;
        }
    }

    pub fn print(&self) {
        println!(
            "{}",
            serde_json::to_string_pretty(self).expect("report serializes")
        );
    }
}
