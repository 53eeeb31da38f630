use pseudorank_wasm::{dice_table_json, rank_compare_json, subgroup_curve_json};
use serde_json::Value;

#[test]
fn dice_table_at_allocation_b() {
    let v: Value = serde_json::from_str(&dice_table_json(800, 100, 300).unwrap()).unwrap();
    assert_eq!(v["exact"]["p"][0], "35/72");
    assert_eq!(v["exact"]["c_hn"], "1/16");
    assert_eq!(v["exact"]["c_psi"], "0");
}

#[test]
fn dice_table_rejects_empty_groups() {
    assert!(dice_table_json(0, 0, 0).is_err());
}

#[test]
fn subgroup_curve_starts_at_zero_and_grows() {
    let s = subgroup_curve_json(&[10.0, 9.0, 9.0, 8.0], 0.4, 50, 2000, 5).unwrap();
    let v: Value = serde_json::from_str(&s).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows[0]["c_p"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(rows[4]["n11"], 2000);
    assert!((rows[4]["c_p"].as_f64().unwrap() - 0.201).abs() < 2e-3);
    assert!(subgroup_curve_json(&[1.0, 2.0], 0.4, 50, 100, 3).is_err());
}

#[test]
fn rank_compare_on_small_data() {
    let s = rank_compare_json("group,value\na,1\nb,2\nb,3\n").unwrap();
    let v: Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["groups"][0]["pseudo_ranks"][0], 1.25);
    assert_eq!(v["groups"][1]["ranks"][1], 3.0);
    assert_eq!(v["kw_pseudo"]["ranking"], "pseudo");
    assert!(rank_compare_json("group,value\na,x\n").unwrap_err().contains("line 2"));
}
