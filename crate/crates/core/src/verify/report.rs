//! Check reports and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::witness::Witness;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    Pass,
    Fail,
    VerifiedSampled,
    BudgetExceeded,
    Skipped,
}

impl ReportStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportStatus::Pass => "pass",
            ReportStatus::Fail => "fail",
            ReportStatus::VerifiedSampled => "verified-sampled",
            ReportStatus::BudgetExceeded => "budget-exceeded",
            ReportStatus::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub status: ReportStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub elapsed_ms: u64,
    #[serde(default)]
    pub sizes: BTreeMap<String, usize>,
    #[serde(default)]
    pub details: Vec<String>,
    #[serde(default)]
    pub flags: Vec<String>,
}

impl CheckReport {
    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        CheckReport {
            name: name.to_string(),
            status: ReportStatus::Skipped,
            witness: None,
            elapsed_ms: 0,
            sizes: BTreeMap::new(),
            details: vec![reason.into()],
            flags: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

pub fn render_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialise")
}

pub fn render_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{:<18} {:<17} {:>8} ms", r.name, r.status.as_str(), r.elapsed_ms);
        for d in &r.details {
            let _ = writeln!(out, "    {d}");
        }
        if !r.flags.is_empty() {
            let _ = writeln!(out, "    flags: {}", r.flags.join(", "));
        }
        if let Some(w) = &r.witness {
            let _ = writeln!(out, "    witness: {}", serde_json::to_string(w).expect("witness serialises"));
        }
    }
    out
}

pub fn emit_report(reports: &[CheckReport], format: Format, path: &Path) -> Result<()> {
    let text = match format {
        Format::Json => render_json(reports),
        Format::Text => render_text(reports),
    };
    std::fs::write(path, text)?;
    Ok(())
}

/// Copy with timing fields zeroed, for comparing runs.
pub fn without_timing(reports: &[CheckReport]) -> Vec<CheckReport> {
    reports.iter().cloned().map(|mut r| {
        r.elapsed_ms = 0;
        r
    }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_pass() {
        assert_eq!(render_json(&[]), "[]");
        let mut r = CheckReport::skipped("x", "why");
        r.status = ReportStatus::Pass;
        let v: serde_json::Value = serde_json::from_str(&render_json(&[r])).unwrap();
        assert_eq!(v[0]["status"], "pass");
        assert!(v[0].get("witness").is_none());
        let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
        for k in ["name", "status", "elapsed_ms", "sizes"] {
            assert!(keys.iter().any(|x| *x == k));
        }
    }

    #[test]
    fn unwritable_path() {
        assert!(emit_report(&[], Format::Json, Path::new("/nonexistent-dir/x/report.json")).is_err());
    }
}
