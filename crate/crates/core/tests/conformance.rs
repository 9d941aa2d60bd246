use flowgraphs::validator::parse_line;
use serde_json::Value;

fn cases() -> Vec<Value> {
    let text = include_str!("fixtures/assertion_conformance.json");
    serde_json::from_str::<Vec<Value>>(text).expect("fixture is a JSON array")
}

/// Cases whose classification differs from the reference engine's.
pub fn mismatches() -> Vec<String> {
    let mut out = Vec::new();
    for case in cases() {
        let input = case["input"].as_str().unwrap();
        let expected = case["match"].as_bool().unwrap().then(|| {
            (
                case["command"].as_str().unwrap(),
                case["source"].as_str().unwrap(),
                case["target"].as_str().unwrap(),
            )
        });
        let got = parse_line(input).map(|(c, s, t)| (c.as_str(), s, t));
        if got != expected {
            out.push(format!("{input:?}: expected {expected:?}, got {got:?}"));
        }
    }
    out
}

#[test]
fn fixture_has_two_hundred_cases_of_both_kinds() {
    let cases = cases();
    assert_eq!(cases.len(), 200);
    let matching = cases.iter().filter(|c| c["match"] == Value::Bool(true)).count();
    assert!(matching > 20 && matching < 180, "{matching}");
}

#[test]
fn classification_matches_reference_engine() {
    let bad = mismatches();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
