//! Estimators checked against definition-level double loops over the count
//! function.

use pseudorank::effects::{estimate_p, estimate_pairwise, estimate_psi};
use pseudorank::ranking::{count, pseudo_ranks, ranks};
use pseudorank::GroupedData;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `w_ri = (1/(n_r n_i)) Σ_l Σ_k c(X_ik - X_rl)`
fn w_oracle(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = g.len();
    let mut w = vec![vec![0.0; d]; d];
    for r in 0..d {
        for i in 0..d {
            let mut s = 0.0;
            for &x in &g[i] {
                for &y in &g[r] {
                    s += count(x - y);
                }
            }
            w[r][i] = s / (g[r].len() * g[i].len()) as f64;
        }
    }
    w
}

/// `∫ M̂ dF̂_i` with `M̂ = Σ_r λ_r F̂_r`, evaluated pointwise.
fn effect_oracle(g: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    g.iter()
        .map(|gi| {
            gi.iter()
                .map(|&x| {
                    g.iter()
                        .zip(lambda)
                        .map(|(gr, l)| {
                            l * gr.iter().map(|&y| count(x - y)).sum::<f64>() / gr.len() as f64
                        })
                        .sum::<f64>()
                })
                .sum::<f64>()
                / gi.len() as f64
        })
        .collect()
}

fn rank_oracle(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let all: Vec<f64> = g.iter().flatten().copied().collect();
    g.iter()
        .map(|gi| {
            gi.iter()
                .map(|&x| 0.5 + all.iter().map(|&y| count(x - y)).sum::<f64>())
                .collect()
        })
        .collect()
}

fn random_groups(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let d = rng.random_range(2..=5);
    (0..d)
        .map(|_| {
            let n = rng.random_range(1..=12);
            (0..n)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        rng.random_range(0..6) as f64
                    } else {
                        rng.random_range(-1.0..7.0)
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn estimators_match_double_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1500 {
        let g = random_groups(&mut rng);
        let data = GroupedData::from_values(g.clone()).unwrap();
        let n = data.total() as f64;
        let d = g.len() as f64;

        let w = estimate_pairwise(&data);
        let wo = w_oracle(&g);
        for r in 0..g.len() {
            for i in 0..g.len() {
                assert!((w.w[r][i] - wo[r][i]).abs() < 1e-12);
                assert_eq!(w.w[r][i] + w.w[i][r], 1.0);
            }
            assert_eq!(w.w[r][r], 0.5);
        }

        let lambda_p: Vec<f64> = g.iter().map(|x| x.len() as f64 / n).collect();
        let lambda_psi = vec![1.0 / d; g.len()];
        let p = estimate_p(&data).values;
        let psi = estimate_psi(&data).values;
        for (a, b) in p.iter().zip(effect_oracle(&g, &lambda_p)) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in psi.iter().zip(effect_oracle(&g, &lambda_psi)) {
            assert!((a - b).abs() < 1e-12);
        }
        // reconstruction p = W'(n/N), psi = W'(1/d)1
        for (a, b) in p.iter().zip(w.weighted_columns(&lambda_p)) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in psi.iter().zip(w.weighted_columns(&lambda_psi)) {
            assert!((a - b).abs() < 1e-12);
        }

        for (a, b) in ranks(&data).ranks.iter().flatten().zip(rank_oracle(&g).iter().flatten()) {
            assert_eq!(a, b);
        }
        let ps = pseudo_ranks(&data);
        for (i, k, v) in ps.iter() {
            let x = g[i][k];
            let s: f64 = g
                .iter()
                .map(|gr| gr.iter().map(|&y| count(x - y)).sum::<f64>() / gr.len() as f64)
                .sum();
            assert!((v - (0.5 + n / d * s)).abs() < 1e-12);
        }

        // weighted and unweighted identities
        let wsum: f64 = p.iter().zip(&lambda_p).map(|(a, b)| a * b).sum();
        assert!((wsum - 0.5).abs() < 1e-12);
        assert!((psi.iter().sum::<f64>() / d - 0.5).abs() < 1e-12);
        if g.len() == 2 {
            assert!(((p[1] - p[0]) - (psi[1] - psi[0])).abs() < 1e-12);
        }
    }
}

#[test]
fn balanced_effects_coincide() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.random_range(1..10);
        let g: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..n).map(|_| rng.random_range(0..5) as f64).collect())
            .collect();
        let data = GroupedData::from_values(g).unwrap();
        assert_eq!(estimate_p(&data).values, estimate_psi(&data).values);
    }
}

#[test]
fn effects_are_monotone_invariant() {
    let data = GroupedData::from_values(vec![
        vec![0.5, 1.0, 1.0, 3.0],
        vec![2.0, 2.5],
        vec![-1.0, 1.0, 4.0, 4.0, 5.0],
    ])
    .unwrap();
    let t = data.map_values(|u| u.powi(3) + 2.0 * u).unwrap();
    assert_eq!(estimate_p(&data), estimate_p(&t));
    assert_eq!(estimate_psi(&data), estimate_psi(&t));
    assert_eq!(estimate_pairwise(&data), estimate_pairwise(&t));
}

#[test]
fn equal_n_iid_groups_average_to_half() {
    let data = GroupedData::from_values(vec![
        vec![0.1, 0.7, 0.4],
        vec![0.3, 0.9, 0.2],
        vec![0.5, 0.6, 0.8],
    ])
    .unwrap();
    let p = estimate_p(&data).values;
    assert!((p.iter().sum::<f64>() / 3.0 - 0.5).abs() < 1e-15);
}
