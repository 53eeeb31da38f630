//! Rank tests and effect intervals on hand-checked data, plus invariances.

use pseudorank::confidence::{ci_psi, effect_intervals, interval_p, IntervalOptions};
use pseudorank::effects::EffectKind;
use pseudorank::hypothesis::{anova_2x2, contrast_test, hn_trend, kruskal_wallis, Contrast, Side};
use pseudorank::ranking::count;
use pseudorank::simulate::{sample, substream};
use pseudorank::{analytic::DistributionSpec, GroupedData, RankKind};

fn hand_cells() -> GroupedData {
    GroupedData::factorial([vec![1., 5.], vec![2., 6.], vec![3., 8.], vec![4., 7.]]).unwrap()
}

fn unbalanced() -> GroupedData {
    GroupedData::from_values(vec![
        vec![1.2, 3.4, 0.7, 2.2, 2.2],
        vec![2.9, 4.1, 3.3],
        vec![5.0, 2.2, 4.4, 6.1, 3.9, 4.8, 7.0],
    ])
    .unwrap()
}

#[test]
fn contrast_hand_example() {
    let d = hand_cells();
    let ab = contrast_test(&d, &Contrast::AB, RankKind::Ordinary).unwrap();
    assert!((ab.statistic - -0.246_182_981_958_665_45).abs() < 1e-12);
    assert!((ab.statistic_squared.unwrap() - 2.0 / 33.0).abs() < 1e-12);
    assert!((ab.df.unwrap() - 272.25 / 76.125).abs() < 1e-12);
    assert!((ab.p_value - 0.819_012_898_050_800_2).abs() < 1e-9);
    let a = contrast_test(&d, &Contrast::A, RankKind::Ordinary).unwrap();
    assert!((a.statistic - -0.984_731_927_834_661_8).abs() < 1e-12);
    assert!((a.p_value - 0.386_595_234_269_293_9).abs() < 1e-9);
    // balanced: pseudo-ranks give the same statistic
    let ab_psi = contrast_test(&d, &Contrast::AB, RankKind::Pseudo).unwrap();
    assert_eq!(ab.statistic, ab_psi.statistic);
}

#[test]
fn anova_hand_example() {
    let d = GroupedData::factorial([vec![0., 2.], vec![1., 3.], vec![2., 4.], vec![3., 5.]]).unwrap();
    let ab = anova_2x2(&d, &Contrast::AB).unwrap();
    assert_eq!(ab.statistic, 0.0);
    assert!((ab.p_value - 1.0).abs() < 1e-15);
    let a = anova_2x2(&d, &Contrast::A).unwrap();
    assert!((a.statistic - 4.0).abs() < 1e-12);
    assert_eq!((a.df, a.df2), (Some(1.0), Some(4.0)));
    assert!((a.p_value - 0.116_116_523_516_815_59).abs() < 1e-10);
}

#[test]
fn kruskal_wallis_hand_example() {
    let d = GroupedData::from_values(vec![vec![1., 2.], vec![3., 4.], vec![5., 6.]]).unwrap();
    let r = kruskal_wallis(&d, RankKind::Ordinary).unwrap();
    assert!((r.statistic - 80.0 / 17.5).abs() < 1e-12);
    assert!((r.p_value - 0.101_701_392_301_5).abs() < 1e-10);
}

/// Trend statistic from the definition with explicit double loops.
fn hn_oracle(g: &[Vec<f64>], c: &[f64], pseudo: bool) -> f64 {
    let d = g.len();
    let n: usize = g.iter().map(Vec::len).sum();
    let nf = n as f64;
    let lambda: Vec<f64> = g
        .iter()
        .map(|x| if pseudo { 1.0 / d as f64 } else { x.len() as f64 / nf })
        .collect();
    let score = |x: f64| -> f64 {
        0.5 + nf
            * g.iter()
                .zip(&lambda)
                .map(|(gr, l)| l * gr.iter().map(|&y| count(x - y)).sum::<f64>() / gr.len() as f64)
                .sum::<f64>()
    };
    let cbar = c.iter().sum::<f64>() / d as f64;
    let (mut num, mut var) = (0.0, 0.0);
    for (i, gi) in g.iter().enumerate() {
        let r: Vec<f64> = gi.iter().map(|&x| score(x)).collect();
        let m = r.iter().sum::<f64>() / r.len() as f64;
        let s2 = r.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (r.len() as f64 - 1.0);
        num += (c[i] - cbar) * (m - 0.5) / nf;
        var += (c[i] - cbar).powi(2) * s2 / (nf * nf * r.len() as f64);
    }
    num / var.sqrt()
}

#[test]
fn trend_matches_definition() {
    let d = unbalanced();
    let g: Vec<Vec<f64>> = d.groups().iter().map(|x| x.values.clone()).collect();
    for (kind, pseudo) in [(RankKind::Ordinary, false), (RankKind::Pseudo, true)] {
        let r = hn_trend(&d, &[1.0, 2.0, 3.0], kind, Side::TwoSided).unwrap();
        assert!((r.statistic - hn_oracle(&g, &[1.0, 2.0, 3.0], pseudo)).abs() < 1e-12);
        let inc = hn_trend(&d, &[1.0, 2.0, 3.0], kind, Side::Increasing).unwrap();
        let dec = hn_trend(&d, &[1.0, 2.0, 3.0], kind, Side::Decreasing).unwrap();
        assert!((inc.p_value + dec.p_value - 1.0).abs() < 1e-14);
        assert!(inc.p_value < 0.05);
        assert!((r.p_value - 2.0 * inc.p_value.min(dec.p_value)).abs() < 1e-15);
    }
}

#[test]
fn rank_tests_are_monotone_invariant() {
    let d = unbalanced();
    let t = d.map_values(|u| (u / 2.0).exp() - 7.0).unwrap();
    for kind in [RankKind::Ordinary, RankKind::Pseudo] {
        assert_eq!(kruskal_wallis(&d, kind).unwrap(), kruskal_wallis(&t, kind).unwrap());
        assert_eq!(
            hn_trend(&d, &[0.0, 1.0, 3.0], kind, Side::TwoSided).unwrap(),
            hn_trend(&t, &[0.0, 1.0, 3.0], kind, Side::TwoSided).unwrap()
        );
    }
    let h = hand_cells();
    let ht = h.map_values(|u| u * u * u).unwrap();
    for c in [Contrast::A, Contrast::B, Contrast::AB] {
        assert_eq!(
            contrast_test(&h, &c, RankKind::Pseudo).unwrap(),
            contrast_test(&ht, &c, RankKind::Pseudo).unwrap()
        );
    }
}

#[test]
fn within_group_order_is_irrelevant() {
    let d = unbalanced();
    let mut g: Vec<Vec<f64>> = d.groups().iter().map(|x| x.values.clone()).collect();
    for v in &mut g {
        v.reverse();
        v.rotate_left(1);
    }
    let p = GroupedData::from_values(g).unwrap();
    for kind in [RankKind::Ordinary, RankKind::Pseudo] {
        let a = kruskal_wallis(&d, kind).unwrap();
        let b = kruskal_wallis(&p, kind).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-12);
    }
}

#[test]
fn balanced_designs_agree_across_rankings() {
    let d = GroupedData::from_values(vec![
        vec![0.3, 1.0, 1.0, 2.5],
        vec![1.2, 1.9, 0.1, 3.3],
        vec![2.0, 2.0, 4.0, 1.0],
    ])
    .unwrap();
    let a = kruskal_wallis(&d, RankKind::Ordinary).unwrap();
    let b = kruskal_wallis(&d, RankKind::Pseudo).unwrap();
    assert_eq!((a.statistic, a.p_value), (b.statistic, b.p_value));
    let a = hn_trend(&d, &[1.0, 2.0, 3.0], RankKind::Ordinary, Side::TwoSided).unwrap();
    let b = hn_trend(&d, &[1.0, 2.0, 3.0], RankKind::Pseudo, Side::TwoSided).unwrap();
    assert_eq!((a.statistic, a.p_value), (b.statistic, b.p_value));
    let pi = interval_p(&d, 0.95).unwrap();
    let ci = ci_psi(&d, 0.95).unwrap();
    assert_eq!(pi.intervals, ci.intervals);
}

#[test]
fn degenerate_inputs_are_flagged() {
    let d = GroupedData::from_values(vec![vec![1.0; 3], vec![1.0; 2]]).unwrap();
    let r = kruskal_wallis(&d, RankKind::Pseudo).unwrap();
    assert!(r.degenerate);
    assert!(!r.rejects(0.5));
    let h = GroupedData::factorial([vec![1., 1.], vec![2., 2.], vec![3., 3.], vec![4., 4.]]).unwrap();
    assert!(contrast_test(&h, &Contrast::AB, RankKind::Ordinary).unwrap().degenerate);
    assert!(anova_2x2(&h, &Contrast::A).unwrap().degenerate);
}

#[test]
fn misuse_is_rejected() {
    let d = unbalanced();
    assert!(hn_trend(&d, &[1.0, 2.0], RankKind::Ordinary, Side::TwoSided).is_err());
    assert!(contrast_test(&d, &Contrast::AB, RankKind::Pseudo).is_err());
    let one = GroupedData::factorial([vec![1.], vec![2., 3.], vec![4., 5.], vec![6., 7.]]).unwrap();
    assert!(contrast_test(&one, &Contrast::AB, RankKind::Pseudo).is_err());
    assert!(ci_psi(&d, 0.3).is_err());
    assert!(ci_psi(&d, 1.0).is_err());
}

#[test]
fn intervals_bracket_estimates_and_stay_in_unit_interval() {
    let d = unbalanced();
    for kind in [EffectKind::UnweightedPsi, EffectKind::WeightedP] {
        for logit in [false, true] {
            let rep = effect_intervals(&d, 0.9, kind, IntervalOptions { logit }).unwrap();
            for g in &rep.intervals {
                assert!(0.0 <= g.lower && g.lower <= g.estimate);
                assert!(g.estimate <= g.upper && g.upper <= 1.0);
            }
        }
    }
    assert!(interval_p(&d, 0.95).unwrap().note.is_some());
}

#[test]
fn width_shrinks_like_root_n() {
    let specs = [
        DistributionSpec::normal(0.0, 1.0),
        DistributionSpec::normal(0.5, 2.0),
        DistributionSpec::normal(1.0, 1.0),
    ];
    let sizes = [20usize, 40, 10];
    let mean_width = |scale: usize| -> f64 {
        let mut total = 0.0;
        for k in 0..200 {
            let mut rng = substream(77 + scale as u64, k);
            let g: Vec<Vec<f64>> = specs
                .iter()
                .zip(sizes)
                .map(|(s, n)| sample(s, n * scale, &mut rng))
                .collect();
            let rep = ci_psi(&GroupedData::from_values(g).unwrap(), 0.95).unwrap();
            total += rep.intervals.iter().map(|g| g.upper - g.lower).sum::<f64>();
        }
        total
    };
    let ratio = mean_width(4) / mean_width(1);
    assert!((ratio / 0.5 - 1.0).abs() < 0.15, "ratio {ratio}");
}
