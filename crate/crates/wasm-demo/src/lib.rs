//! Browser bindings for three interactive views: the dice allocation
//! explorer, the sub-group interaction curve and a rank vs pseudo-rank
//! comparison on pasted data. Every export returns a JSON string.

use pseudorank::analytic::{
    noncentralities, subgroup_table, Allocation, DistributionSpec, NonCentralityRequest, Quantity,
};
use pseudorank::effects::{estimate_p, estimate_psi};
use pseudorank::hypothesis::kruskal_wallis;
use pseudorank::io::read_long_csv;
use pseudorank::ranking::{pseudo_ranks, ranks};
use pseudorank::RankKind;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn dice() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::uniform_discrete(&[9., 16., 17., 20., 21., 22.]),
        DistributionSpec::uniform_discrete(&[13., 14., 15., 18., 19., 26.]),
        DistributionSpec::uniform_discrete(&[10., 11., 12., 23., 24., 25.]),
    ]
}

/// Effects and non-centralities of the three dice at integer group sizes.
pub fn dice_table_json(n1: u32, n2: u32, n3: u32) -> Result<String, String> {
    let sizes = [n1 as u64, n2 as u64, n3 as u64];
    let rep = noncentralities(
        &dice(),
        &Allocation::counts(&sizes),
        &NonCentralityRequest {
            trend: Some((1..=3).map(Quantity::integer).collect()),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(json!({
        "sizes": sizes,
        "p": rep.p,
        "psi": rep.psi,
        "c_p": rep.c_p,
        "c_hn": rep.c_hn,
        "n_c_p": rep.n_c_p,
        "exact": rep.exact,
    })
    .to_string())
}

/// Interaction non-centrality of the normal 2x2 model as the first stratum
/// grows from `n_fixed` to `n_max` in `steps` points.
pub fn subgroup_curve_json(mu: &[f64], sigma: f64, n_fixed: u32, n_max: u32, steps: u32) -> Result<String, String> {
    if mu.len() != 4 {
        return Err("four cell means are required".into());
    }
    if steps < 2 || n_max < n_fixed || n_fixed == 0 {
        return Err("need n_fixed >= 1, n_max >= n_fixed and at least 2 steps".into());
    }
    let specs: Vec<DistributionSpec> = mu.iter().map(|&m| DistributionSpec::normal(m, sigma)).collect();
    let growing: Vec<u64> = (0..steps)
        .map(|k| n_fixed as u64 + (n_max - n_fixed) as u64 * k as u64 / (steps - 1) as u64)
        .collect();
    let table = subgroup_table(&specs, (n_fixed as u64, n_fixed as u64), &growing, &[1.0, -1.0, -1.0, 1.0])
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&table).map_err(|e| e.to_string())
}

/// Ranks, pseudo-ranks, both effect estimates and both Kruskal-Wallis
/// variants for a long-format CSV.
pub fn rank_compare_json(csv: &str) -> Result<String, String> {
    let data = read_long_csv(csv.as_bytes()).map_err(|e| e.to_string())?;
    let r = ranks(&data);
    let ps = pseudo_ranks(&data);
    let groups: Vec<_> = data
        .groups()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            json!({
                "label": g.label,
                "values": g.values,
                "ranks": r.ranks[i],
                "pseudo_ranks": ps.ranks[i],
            })
        })
        .collect();
    let kw = |kind| kruskal_wallis(&data, kind).map_err(|e| e.to_string());
    Ok(json!({
        "groups": groups,
        "p": estimate_p(&data).values,
        "psi": estimate_psi(&data).values,
        "kw_ordinary": kw(RankKind::Ordinary)?,
        "kw_pseudo": kw(RankKind::Pseudo)?,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn dice_table(n1: u32, n2: u32, n3: u32) -> Result<String, JsError> {
    dice_table_json(n1, n2, n3).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn subgroup_curve(mu: &[f64], sigma: f64, n_fixed: u32, n_max: u32, steps: u32) -> Result<String, JsError> {
    subgroup_curve_json(mu, sigma, n_fixed, n_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn rank_compare(csv: &str) -> Result<String, JsError> {
    rank_compare_json(csv).map_err(|e| JsError::new(&e))
}
