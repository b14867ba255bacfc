//! Structured report emitted by every subcommand.  The `--json` form
//! round-trips through serde and embeds the parsed surface description in
//! its schema form, so reports can be re-fed to the tool.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = concat!("quartic ", env!("CARGO_PKG_VERSION"), " (report-schema 1)");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub certification: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, certification: &str) -> Self {
        Report {
            version: VERSION.to_string(),
            command: command.to_string(),
            inputs,
            results,
            certification: certification.to_string(),
        }
    }

    pub fn print_json(&self) {
        println!(
            "{}",
            serde_json::to_string_pretty(self).expect("report serializes")
        );
    }
}
