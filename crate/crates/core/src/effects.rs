//! Estimators of relative effects.
//!
//! * weighted effects `p_i = ∫ H dF_i` with `H = Σ (n_r/N) F_r`, estimated
//!   from mid-ranks as `(mean rank_i - 1/2) / N`;
//! * unweighted effects `psi_i = ∫ G dF_i` with `G = (1/d) Σ F_r`, estimated
//!   the same way from pseudo-ranks;
//! * the pairwise effects `w_ri = ∫ F_r dF_i`.

use serde::{Deserialize, Serialize};

use crate::data::GroupedData;
use crate::ranking::{self, count, RankAssignment, RankKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectKind {
    WeightedP,
    UnweightedPsi,
}

impl EffectKind {
    pub fn ranking(self) -> RankKind {
        match self {
            EffectKind::WeightedP => RankKind::Ordinary,
            EffectKind::UnweightedPsi => RankKind::Pseudo,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectVector {
    pub kind: EffectKind,
    pub values: Vec<f64>,
    pub group_sizes: Vec<usize>,
    pub total: usize,
}

/// `w[r][i]` estimates `w_ri = P(X_r < X_i) + P(X_r = X_i)/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseEffectMatrix {
    pub w: Vec<Vec<f64>>,
}

impl PairwiseEffectMatrix {
    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// `W' a`, i.e. `Σ_r a_r w_ri` for every column `i`.
    pub fn weighted_columns(&self, a: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|r| a[r] * self.w[r][i]).sum())
            .collect()
    }
}

pub(crate) fn from_ranks(
    ranks: &RankAssignment,
    kind: EffectKind,
    sizes: Vec<usize>,
) -> EffectVector {
    let total = ranks.total();
    let n = total as f64;
    let values = ranks
        .group_means()
        .into_iter()
        .map(|m| (m - 0.5) / n)
        .collect();
    EffectVector {
        kind,
        values,
        group_sizes: sizes,
        total,
    }
}

pub fn estimate_p(data: &GroupedData) -> EffectVector {
    from_ranks(&ranking::ranks(data), EffectKind::WeightedP, data.sizes())
}

pub fn estimate_psi(data: &GroupedData) -> EffectVector {
    from_ranks(
        &ranking::pseudo_ranks(data),
        EffectKind::UnweightedPsi,
        data.sizes(),
    )
}

pub fn estimate(data: &GroupedData, kind: EffectKind) -> EffectVector {
    match kind {
        EffectKind::WeightedP => estimate_p(data),
        EffectKind::UnweightedPsi => estimate_psi(data),
    }
}

pub fn estimate_pairwise(data: &GroupedData) -> PairwiseEffectMatrix {
    let groups = data.groups();
    let d = groups.len();
    let mut w = vec![vec![0.5; d]; d];
    for r in 0..d {
        for i in (r + 1)..d {
            let (xr, xi) = (&groups[r].values, &groups[i].values);
            let mut s = 0.0;
            for &a in xi {
                for &b in xr {
                    s += count(a - b);
                }
            }
            let v = s / (xr.len() * xi.len()) as f64;
            w[r][i] = v;
            w[i][r] = 1.0 - v;
        }
    }
    PairwiseEffectMatrix { w }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tied_singletons() {
        let d = GroupedData::from_values(vec![vec![5.0], vec![5.0]]).unwrap();
        assert_eq!(estimate_p(&d).values, vec![0.5, 0.5]);
        assert_eq!(estimate_pairwise(&d).w[0][1], 0.5);
    }

    #[test]
    fn separated_groups() {
        let d = GroupedData::from_values(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let w = estimate_pairwise(&d);
        assert_eq!(w.w[0][1], 1.0);
        assert_eq!(w.w[1][0], 0.0);
        // ranks 1,2 | 3,4 over N = 4: (1.5 - .5)/4, (3.5 - .5)/4
        assert_eq!(estimate_p(&d).values, vec![0.25, 0.75]);
        assert_eq!(estimate_psi(&d).values, vec![0.25, 0.75]);
    }

    #[test]
    fn unbalanced_psi_matches_definition() {
        // G-hat = (F1 + F2)/2; ∫G dF1 at x=1: (1/2 + 0)/2 = 1/4
        // ∫G dF2: x=2 -> (1 + 1/4)/2, x=3 -> (1 + 3/4)/2, mean = 3/4
        let d = GroupedData::from_values(vec![vec![1.0], vec![2.0, 3.0]]).unwrap();
        let psi = estimate_psi(&d).values;
        assert!((psi[0] - 0.25).abs() < 1e-12);
        assert!((psi[1] - 0.75).abs() < 1e-12);
    }
}
