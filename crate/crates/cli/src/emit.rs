//! Deterministic output writers.
//!
//! Every file starts with a schema-version record so downstream plots and
//! regression diffs can pin the column set. Floats are formatted with
//! Rust's shortest-round-trip `Display`, which is what makes rerunning a
//! fixture a byte-identical operation.

use mcf_ttdl_core::rf_filter::FilterResponse;
use mcf_ttdl_core::{TapSet, ValidationReport};

pub const SCHEMA_VERSION: u32 = 1;

pub fn response_csv(kind: &str, resp: &FilterResponse) -> String {
    let mag_db = resp.magnitude_db();
    let phase = resp.phase_rad();
    let mut out = String::with_capacity(resp.freq_ghz().len() * 24 + 64);
    out.push_str("schema_version,kind\n");
    out.push_str(&format!("{SCHEMA_VERSION},{kind}\n"));
    out.push_str("freq_ghz,mag_db,phase_rad\n");
    for ((f, db), ph) in resp.freq_ghz().iter().zip(&mag_db).zip(&phase) {
        out.push_str(&format!("{f},{db},{ph}\n"));
    }
    out
}

pub fn taps_csv(kind: &str, taps: &TapSet) -> String {
    let mut out = String::new();
    out.push_str("schema_version,kind\n");
    out.push_str(&format!("{SCHEMA_VERSION},{kind}\n"));
    out.push_str("tap_index,delay_ps,amplitude,label\n");
    for (i, tap) in taps.taps().iter().enumerate() {
        out.push_str(&format!(
            "{i},{},{},{}\n",
            tap.delay_ps, tap.amplitude, tap.label
        ));
    }
    out
}

/// Builder for the line-delimited `key=value` record files.
pub struct Record {
    lines: Vec<String>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Self {
            lines: vec![
                format!("schema_version={SCHEMA_VERSION}"),
                format!("kind={kind}"),
            ],
        }
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.lines.push(format!("{key}={value}"));
        self
    }

    pub fn push_list(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let joined = values
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        self.lines.push(format!("{key}={joined}"));
        self
    }

    /// One record triple per rule, then the overall verdict.
    pub fn push_rule_checks(&mut self, report: &ValidationReport) -> &mut Self {
        self.push("pass", report.pass());
        self.push("rules", report.checks.len());
        for check in &report.checks {
            self.push(&format!("{}.pass", check.rule), check.pass);
            self.push(&format!("{}.margin", check.rule), check.margin);
            if !check.unit.is_empty() {
                self.push(&format!("{}.unit", check.rule), check.unit);
            }
            self.push(&format!("{}.detail", check.rule), &check.detail);
        }
        self
    }

    pub fn finish(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}
