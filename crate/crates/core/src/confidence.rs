//! Wald-type intervals for relative effects.
//!
//! The standard error of `ψ̂_i` (or `p̂_i`) comes from the empirical
//! influence decomposition of the plug-in estimator `∫ M̂ dF̂_i`, where `M̂`
//! is the unweighted (`Ĝ`) or weighted (`Ĥ`) mean of the normalized
//! empirical distribution functions. Observation `X_rl` carries
//!
//! ```text
//! u = [r = i] M̂(X_il) / n_i + λ_r (1 - F̂_i(X_rl)) / n_r
//! ```
//!
//! with `λ_r = 1/d` for `ψ` and `λ_r = n_r/N` for `p`. Influences are
//! centered within each group and `Var(estimate) = Σ_r n_r s_r^2(u)`.

use serde::{Deserialize, Serialize};

use crate::data::GroupedData;
use crate::effects::{self, EffectKind};
use crate::error::{Error, Result};
use crate::ranking::{mean, SortedGroups};
use crate::special::normal_quantile;

pub const P_INTERVAL_CAVEAT: &str = "intervals for the weighted effects p_i depend on the \
relative sample sizes and cannot strictly be interpreted as confidence intervals unless the \
design is balanced";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    PsiCi,
    PInterval,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalOptions {
    /// Build the limits on the logit scale and transform back.
    pub logit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupInterval {
    pub label: String,
    pub lower: f64,
    pub estimate: f64,
    pub upper: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub kind: IntervalKind,
    pub level: f64,
    pub logit: bool,
    pub intervals: Vec<GroupInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceComponents {
    pub target: usize,
    pub kind: EffectKind,
    /// centered influences, aligned with the observations
    pub influences: Vec<Vec<f64>>,
    /// per-group sample variance of the influences
    pub group_variances: Vec<f64>,
}

impl InfluenceComponents {
    /// Estimated variance of the effect estimator, `Σ_r n_r s_r^2`.
    pub fn variance(&self) -> f64 {
        self.influences
            .iter()
            .zip(&self.group_variances)
            .map(|(g, v)| g.len() as f64 * v)
            .sum()
    }
}

fn mixing_weights(data: &GroupedData, kind: EffectKind) -> Vec<f64> {
    let d = data.num_groups() as f64;
    let n = data.total() as f64;
    data.sizes()
        .iter()
        .map(|&ni| match kind {
            EffectKind::UnweightedPsi => 1.0 / d,
            EffectKind::WeightedP => ni as f64 / n,
        })
        .collect()
}

fn influences_with(
    data: &GroupedData,
    sorted: &SortedGroups,
    weights: &[f64],
    target: usize,
    kind: EffectKind,
) -> InfluenceComponents {
    let groups = data.groups();
    let n_i = groups[target].len() as f64;
    let mix = |x: f64| -> f64 {
        weights
            .iter()
            .enumerate()
            .map(|(s, w)| w * sorted.ecdf(s, x))
            .sum()
    };
    let mut influences = Vec::with_capacity(groups.len());
    let mut group_variances = Vec::with_capacity(groups.len());
    for (r, g) in groups.iter().enumerate() {
        let n_r = g.len() as f64;
        let mut u: Vec<f64> = g
            .values
            .iter()
            .map(|&x| {
                let own = if r == target { mix(x) / n_i } else { 0.0 };
                own + weights[r] * (1.0 - sorted.ecdf(target, x)) / n_r
            })
            .collect();
        let m = mean(&u);
        for v in &mut u {
            *v -= m;
        }
        let var = if u.len() > 1 {
            u.iter().map(|v| v * v).sum::<f64>() / (n_r - 1.0)
        } else {
            0.0
        };
        influences.push(u);
        group_variances.push(var);
    }
    InfluenceComponents {
        target,
        kind,
        influences,
        group_variances,
    }
}

pub fn influence_components(
    data: &GroupedData,
    target: usize,
    kind: EffectKind,
) -> Result<InfluenceComponents> {
    if target >= data.num_groups() {
        return Err(Error::invalid(format!(
            "group index {target} out of range for {} groups",
            data.num_groups()
        )));
    }
    let sorted = SortedGroups::new(data);
    let weights = mixing_weights(data, kind);
    Ok(influences_with(data, &sorted, &weights, target, kind))
}

fn intervals(
    data: &GroupedData,
    level: f64,
    kind: EffectKind,
    opts: IntervalOptions,
) -> Result<IntervalReport> {
    if !(level > 0.5 && level < 1.0) {
        return Err(Error::invalid(format!(
            "confidence level must lie in (0.5, 1), got {level}"
        )));
    }
    if let Some(g) = data.groups().iter().find(|g| g.len() < 2) {
        return Err(Error::invalid(format!(
            "intervals need at least two observations per group ('{}' has {})",
            g.label,
            g.len()
        )));
    }
    let z = normal_quantile(0.5 + level / 2.0);
    let est = effects::estimate(data, kind);
    let sorted = SortedGroups::new(data);
    let weights = mixing_weights(data, kind);
    let intervals = data
        .groups()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let se = influences_with(data, &sorted, &weights, i, kind)
                .variance()
                .sqrt();
            let e = est.values[i];
            let (lower, upper) = limits(e, se, z, opts.logit);
            GroupInterval {
                label: g.label.clone(),
                lower,
                estimate: e,
                upper,
                std_error: se,
            }
        })
        .collect();
    Ok(IntervalReport {
        kind: match kind {
            EffectKind::UnweightedPsi => IntervalKind::PsiCi,
            EffectKind::WeightedP => IntervalKind::PInterval,
        },
        level,
        logit: opts.logit,
        intervals,
        note: match kind {
            EffectKind::UnweightedPsi => None,
            EffectKind::WeightedP => Some(P_INTERVAL_CAVEAT.to_string()),
        },
    })
}

fn limits(e: f64, se: f64, z: f64, logit: bool) -> (f64, f64) {
    if logit && e > 0.0 && e < 1.0 {
        let l = (e / (1.0 - e)).ln();
        let h = z * se / (e * (1.0 - e));
        let back = |t: f64| 1.0 / (1.0 + (-t).exp());
        return (back(l - h), back(l + h));
    }
    ((e - z * se).clamp(0.0, 1.0), (e + z * se).clamp(0.0, 1.0))
}

/// Confidence intervals for the unweighted effects `ψ_i`.
pub fn ci_psi(data: &GroupedData, level: f64) -> Result<IntervalReport> {
    intervals(data, level, EffectKind::UnweightedPsi, IntervalOptions::default())
}

/// Descriptive intervals for the weighted effects `p_i`.
pub fn interval_p(data: &GroupedData, level: f64) -> Result<IntervalReport> {
    intervals(data, level, EffectKind::WeightedP, IntervalOptions::default())
}

pub fn effect_intervals(
    data: &GroupedData,
    level: f64,
    kind: EffectKind,
    opts: IntervalOptions,
) -> Result<IntervalReport> {
    intervals(data, level, kind, opts)
}
