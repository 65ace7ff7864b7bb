use classnet_wasm::{analyze_pajek_json, audit_json, mutual_ties_json};
use serde_json::Value;

const CLASS: &str = "*Vertices 4\n1 \"Barron\"\n2 \"Gay\"\n3 \"Hall\"\n4 \"Lane\"\n*Arcs\n1 2 4\n2 1 5\n1 3 2\n3 1 5\n3 4 4\n4 3 4\n";

#[test]
fn analyze_returns_annotated_graph() {
    let v: Value = serde_json::from_str(&analyze_pajek_json(CLASS).unwrap()).unwrap();
    assert_eq!(v["graph"]["nodes"].as_array().unwrap().len(), 4);
    assert!(v["graph"]["annotations"]["density"].as_f64().unwrap() > 0.0);
    assert!(v["communities"]["communities"].is_array());
}

#[test]
fn threshold_changes_mutual_ties() {
    let count = |w| {
        let v: Value = serde_json::from_str(&mutual_ties_json(CLASS, w).unwrap()).unwrap();
        v["graph"]["ties"].as_array().unwrap().len()
    };
    assert_eq!(count(1), 3);
    assert_eq!(count(4), 2);
    assert_eq!(count(5), 0);
}

#[test]
fn audit_scores_and_rejects() {
    let v: Value = serde_json::from_str(&audit_json(&[2, 2, 1, 1, 1, 0, 1, 0, 0, 2]).unwrap()).unwrap();
    assert_eq!(v["score"], 10);
    assert!(audit_json(&[9; 10]).is_err());
    assert!(analyze_pajek_json("*Arcs\n").is_err());
}
