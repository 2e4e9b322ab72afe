//! A deliberately invalid form ideal, its failing report, and the replay of
//! the witness.

use formring::verify::{load_witnesses, render_json, replay, run_scenario, Scenario, ScenarioConfig};

const CONFIG: &str = r#"{
    "name": "bad-gamma", "ring": {"kind": "zmod", "m": 4}, "lambda": 3, "n": 3,
    "ideals": {"bad": {"generators": [2], "gamma": [0, 1]}},
    "checks": [{"name": "validate"}]
}"#;

fn main() -> formring::error::Result<()> {
    let scenario = Scenario::build(ScenarioConfig::from_json(CONFIG)?)?;
    let json = render_json(&run_scenario(&scenario)?);
    println!("{json}");
    for w in load_witnesses(&json)? {
        let out = replay(&scenario, &w)?;
        println!("reproduced: {} ({})", out.reproduced, out.detail);
    }
    Ok(())
}
