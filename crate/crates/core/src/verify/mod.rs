//! Scenario-driven verification: configured checks, reports and witnesses.

pub mod certify;
pub mod checks;
pub mod config;
pub mod report;
pub mod witness;

pub use checks::{run_check, CHECK_NAMES};
pub use config::{CheckSpec, Scenario, ScenarioConfig};
pub use report::{emit_report, render_json, render_text, without_timing, CheckReport, Format, ReportStatus};
pub use witness::{load_witnesses, replay, Claim, ReplayOutcome, Witness};

use crate::error::Result;

/// Runs every configured check in order.
pub fn run_scenario(s: &Scenario) -> Result<Vec<CheckReport>> {
    s.config.checks.iter().map(|c| run_check(s, c)).collect()
}

/// Process exit code for a finished run: 1 on any failure, 2 when some
/// check ran out of budget, 0 otherwise.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == ReportStatus::Fail) {
        1
    } else if reports.iter().any(|r| r.status == ReportStatus::BudgetExceeded) {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(checks: &str) -> Scenario {
        let text = format!(
            r#"{{"name": "f2", "ring": {{"kind": "zmod", "m": 2}}, "lambda": 1, "form_parameter": "min", "n": 2,
                "ideals": {{}}, "checks": {checks}}}"#
        );
        Scenario::build(ScenarioConfig::from_json(&text).unwrap()).unwrap()
    }

    #[test]
    fn empty_check_list() {
        let s = scenario("[]");
        let r = run_scenario(&s).unwrap();
        assert!(r.is_empty());
        assert_eq!(exit_code(&r), 0);
    }

    #[test]
    fn unknown_check_is_a_config_error() {
        let s = scenario(r#"[{"name": "nonsense"}]"#);
        assert!(run_scenario(&s).is_err());
    }

    #[test]
    fn rank_three_checks_skip_at_rank_two() {
        let s = scenario(r#"[{"name": "standard"}, {"name": "steinberg"}]"#);
        let r = run_scenario(&s).unwrap();
        assert_eq!(r[0].status, ReportStatus::Skipped);
        assert_eq!(r[1].status, ReportStatus::Pass);
    }
}
