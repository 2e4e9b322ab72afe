use formring::engine::{CommExpr, LeafKind};
use formring::verify::{load_witnesses, replay, Claim, Scenario, ScenarioConfig, Witness};

const O6: &str = r#"{"name": "o6", "ring": {"kind": "zmod", "m": 2}, "lambda": 1, "form_parameter": "min", "n": 3}"#;

#[test]
fn membership_witness_round_trip() {
    let s = Scenario::build(ScenarioConfig::from_json(O6).unwrap()).unwrap();
    let a = s.unit_level();
    let e = s.instance.leaf(LeafKind::E, &a.ideal).unwrap();
    let g = s.instance.leaf(LeafKind::G, &a.ideal).unwrap();
    let outside = g.store.as_ref().unwrap().iter().find(|m| e.contains(m) == Some(false)).unwrap();
    let inside = e.generators[0].clone();
    let claim = Claim::InSubgroup { expr: CommExpr::leaf(LeafKind::E, &a) };

    let w = Witness::new(claim.clone(), Some(&outside));
    let text = serde_json::to_string(&w).unwrap();
    let back = load_witnesses(&text).unwrap();
    assert_eq!(back, vec![w]);
    assert!(replay(&s, &back[0]).unwrap().reproduced);
    assert!(!replay(&s, &Witness::new(claim, Some(&inside))).unwrap().reproduced);

    let zero = s.level("0").unwrap();
    let c = Witness::new(Claim::Congruent { level: zero }, Some(&inside));
    assert!(replay(&s, &c).unwrap().reproduced);
}

#[test]
fn witness_of_wrong_rank_is_rejected() {
    let s = Scenario::build(ScenarioConfig::from_json(O6).unwrap()).unwrap();
    let w = Witness { claim: Claim::Congruent { level: s.unit_level() }, matrix: Some(vec![vec![1, 0], vec![0, 1]]) };
    assert!(replay(&s, &w).is_err());
}
