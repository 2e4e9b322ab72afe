//! Runs a scenario file and prints the text report.
//!
//! cargo run --release --example run_scenario -- scenarios/f2-orthogonal.json

use formring::verify::{exit_code, render_text, run_scenario, Scenario, ScenarioConfig};

fn main() -> formring::error::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/f2-orthogonal.json").to_string());
    let scenario = Scenario::build(ScenarioConfig::load(path.as_ref())?)?;
    let reports = run_scenario(&scenario)?;
    print!("{}", render_text(&reports));
    println!("exit code {}", exit_code(&reports));
    Ok(())
}
