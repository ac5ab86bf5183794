use iqaoa_wasm::api;
use serde_json::Value;

fn json(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn uniform_distribution_at_zero_angles() {
    let v = json(api::cost_distribution("six", &[0.0, 0.0, 0.0, 0.0], "discard").unwrap());
    assert_eq!(v["qubits"], 10);
    assert_eq!(v["gate_count"], 50);
    assert_eq!(v["optimal_cost"], 223.0);
    assert!((v["optimal_mass"].as_f64().unwrap() - 12.0 / 720.0).abs() < 1e-12);
    let costs = v["costs"].as_array().unwrap();
    assert_eq!(costs.len(), 53);
    let total: f64 = costs.iter().map(|c| c[1].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn distribution_rejects_bad_input() {
    assert!(api::cost_distribution("nine", &[0.0, 0.0], "modulo").is_err());
    assert!(api::cost_distribution("six", &[0.0, 0.0, 0.0], "modulo").is_err());
    assert!(api::cost_distribution("six", &[0.0, 0.0], "sometimes").is_err());
}

#[test]
fn decode_matches_codec() {
    let v = json(api::decode_rank(6, 701, "six").unwrap());
    assert_eq!(v["digits"], serde_json::json!([5, 4, 0, 2, 1, 0]));
    assert_eq!(v["perm_one_indexed"], serde_json::json!([6, 5, 1, 4, 3, 2]));
    assert_eq!(v["cost"], 223.0);
    let v = json(api::decode_rank(4, 10, "six").unwrap());
    assert_eq!(v["perm"], serde_json::json!([1, 3, 0, 2]));
    assert!(v["cost"].is_null());
    assert!(api::decode_rank(4, 24, "").is_err());
}

#[test]
fn small_optimisation_improves_on_uniform() {
    let uniform = json(api::cost_distribution("six", &[0.0, 0.0, 0.0, 0.0], "modulo").unwrap());
    let a = api::optimize("six", 4, 2, 2).unwrap();
    assert_eq!(a, api::optimize("six", 4, 2, 2).unwrap());
    let v = json(a);
    assert_eq!(v["angles"].as_array().unwrap().len(), 4);
    assert!(v["score"].as_f64().unwrap() < uniform["criterion"].as_f64().unwrap());
    assert_eq!(v["optimal_ranks"].as_array().unwrap().len(), 12);
    assert!(
        (v["distribution"]["criterion"].as_f64().unwrap() - v["score"].as_f64().unwrap()).abs()
            < 1e-9
    );
    assert!(api::optimize("six", 1, 0, 1).is_err());
}
