//! Mid-ranks and pseudo-ranks.
//!
//! Both are built from the count function `c(u)` which is `0`, `1/2` or `1`
//! as `u` is negative, zero or positive. The mid-rank of `x` is
//! `1/2 + sum over all observations y of c(x - y)`; the pseudo-rank replaces
//! the pooled sum by an unweighted average of the per-group sums,
//! `1/2 + (N/d) * sum_r (1/n_r) sum_l c(x - X_rl)`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::data::GroupedData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankKind {
    Ordinary,
    Pseudo,
}

impl RankKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RankKind::Ordinary => "ordinary",
            RankKind::Pseudo => "pseudo",
        }
    }
}

/// Ranks aligned with the observations of a [`GroupedData`]:
/// `ranks[i][k]` belongs to observation `k` of group `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankAssignment {
    pub kind: RankKind,
    pub ranks: Vec<Vec<f64>>,
}

impl RankAssignment {
    pub fn total(&self) -> usize {
        self.ranks.iter().map(Vec::len).sum()
    }

    /// Per-group rank means.
    pub fn group_means(&self) -> Vec<f64> {
        self.ranks.iter().map(|r| mean(r)).collect()
    }

    /// Per-group sample variances (denominator `n_i - 1`); `None` for
    /// groups with a single observation.
    pub fn group_variances(&self) -> Vec<Option<f64>> {
        self.ranks.iter().map(|r| sample_variance(r)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.ranks
            .iter()
            .enumerate()
            .flat_map(|(i, g)| g.iter().enumerate().map(move |(k, &r)| (i, k, r)))
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub(crate) fn sample_variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some(ss / (xs.len() - 1) as f64)
}

/// The count function: `0` for `u < 0`, `1/2` for `u == 0`, `1` for `u > 0`.
pub fn count(u: f64) -> f64 {
    if u < 0.0 {
        0.0
    } else if u > 0.0 {
        1.0
    } else {
        0.5
    }
}

/// Mid-ranks of a single sample (ties share the average of the ranks they span).
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let v = values[order[start]];
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == v {
            end += 1;
        }
        // positions start+1 ..= end share their average
        let r = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            out[idx] = r;
        }
        start = end;
    }
    out
}

/// Ordinary mid-ranks in the pooled sample.
pub fn ranks(data: &GroupedData) -> RankAssignment {
    let pooled: Vec<f64> = data.all_values().collect();
    let flat = mid_ranks(&pooled);
    let mut it = flat.into_iter();
    let ranks = data
        .groups()
        .iter()
        .map(|g| it.by_ref().take(g.len()).collect())
        .collect();
    RankAssignment {
        kind: RankKind::Ordinary,
        ranks,
    }
}

/// Sorted copy of every group, used for `O(log n)` count-function sums.
pub(crate) struct SortedGroups {
    sorted: Vec<Vec<f64>>,
}

impl SortedGroups {
    pub(crate) fn new(data: &GroupedData) -> Self {
        let sorted = data
            .groups()
            .iter()
            .map(|g| {
                let mut v = g.values.clone();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
                v
            })
            .collect();
        SortedGroups { sorted }
    }

    /// `sum_l c(x - X_rl)` for group `r`.
    pub(crate) fn count_sum(&self, r: usize, x: f64) -> f64 {
        let v = &self.sorted[r];
        let less = v.partition_point(|&y| y < x);
        let less_or_equal = less + v[less..].partition_point(|&y| y <= x);
        less as f64 + 0.5 * (less_or_equal - less) as f64
    }

    /// Normalized empirical CDF of group `r` at `x`.
    pub(crate) fn ecdf(&self, r: usize, x: f64) -> f64 {
        self.count_sum(r, x) / self.sorted[r].len() as f64
    }
}

/// Pseudo-ranks `1/2 + N * G(x)` where `G` is the unweighted mean of the
/// normalized empirical distribution functions.
pub fn pseudo_ranks(data: &GroupedData) -> RankAssignment {
    let sorted = SortedGroups::new(data);
    let n_total = data.total() as f64;
    let d = data.num_groups() as f64;
    // N / (d n_r) is exactly 1 for balanced data, which keeps pseudo-ranks
    // bitwise equal to mid-ranks in that case.
    let weights: Vec<f64> = data
        .sizes()
        .iter()
        .map(|&n| n_total / (d * n as f64))
        .collect();
    let ranks = data
        .groups()
        .iter()
        .map(|g| {
            g.values
                .iter()
                .map(|&x| {
                    0.5 + weights
                        .iter()
                        .enumerate()
                        .map(|(r, w)| w * sorted.count_sum(r, x))
                        .sum::<f64>()
                })
                .collect()
        })
        .collect();
    RankAssignment {
        kind: RankKind::Pseudo,
        ranks,
    }
}

pub fn rank(data: &GroupedData, kind: RankKind) -> RankAssignment {
    match kind {
        RankKind::Ordinary => ranks(data),
        RankKind::Pseudo => pseudo_ranks(data),
    }
}
