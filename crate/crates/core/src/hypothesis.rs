//! Kruskal-Wallis, Hettmansperger-Norton trend and 2x2 contrast tests, each
//! usable with ordinary ranks or with pseudo-ranks, plus the classical
//! contrast F test on cell means as a parametric comparator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::GroupedData;
use crate::effects::{self, EffectKind};
use crate::error::{Error, Result};
use crate::ranking::{self, mean, sample_variance, RankKind};
use crate::special::{chi_square_sf, t_two_sided, DistributionFunctionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    KruskalWallis,
    HnTrend,
    Contrast,
    Anova,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    #[default]
    TwoSided,
    Increasing,
    Decreasing,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-sided" | "two_sided" => Ok(Side::TwoSided),
            "increasing" => Ok(Side::Increasing),
            "decreasing" => Ok(Side::Decreasing),
            _ => Err(Error::invalid(format!("unknown side '{s}'"))),
        }
    }
}

/// A 2x2 contrast by name or an explicit coefficient vector.
///
/// Serialized as `"A"`, `"B"`, `"AB"` or as an array of coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum Contrast {
    A,
    B,
    AB,
    Custom(Vec<f64>),
}

impl Contrast {
    pub fn coefficients(&self) -> Vec<f64> {
        match self {
            Contrast::A => vec![1.0, 1.0, -1.0, -1.0],
            Contrast::B => vec![1.0, -1.0, 1.0, -1.0],
            Contrast::AB => vec![1.0, -1.0, -1.0, 1.0],
            Contrast::Custom(c) => c.clone(),
        }
    }

    fn is_named(&self) -> bool {
        !matches!(self, Contrast::Custom(_))
    }
}

impl fmt::Display for Contrast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contrast::A => f.write_str("A"),
            Contrast::B => f.write_str("B"),
            Contrast::AB => f.write_str("AB"),
            Contrast::Custom(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for Contrast {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Contrast::A),
            "B" => Ok(Contrast::B),
            "AB" => Ok(Contrast::AB),
            _ => parse_vector(s).map(Contrast::Custom),
        }
    }
}

impl Serialize for Contrast {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Contrast::Custom(c) => c.serialize(s),
            named => s.serialize_str(&named.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Contrast {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Name(String),
            Vector(Vec<f64>),
        }
        match Raw::deserialize(d)? {
            Raw::Name(n) => n.parse().map_err(serde::de::Error::custom),
            Raw::Vector(v) => Ok(Contrast::Custom(v)),
        }
    }
}

/// Parses `"1,2,3"` into a finite vector.
pub fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::invalid(format!("'{}' is not a finite number", t.trim())))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub method: Method,
    /// `None` for the parametric comparator.
    pub ranking: Option<RankKind>,
    pub statistic: f64,
    /// Reference distribution of `statistic`: `chi_square`, `normal`, `t` or `f`.
    pub reference: String,
    /// Degrees of freedom; absent for normal reference distributions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df2: Option<f64>,
    pub p_value: f64,
    /// Unstandardized effect: `c'T_d p` for the trend test, `c'p` for the
    /// rank contrast test, `c'mean` for the F test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<f64>,
    /// `L_N^2` for the contrast test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic_squared: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrast_used: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_increasing: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_decreasing: Option<f64>,
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TestReport {
    fn new(method: Method, ranking: Option<RankKind>, reference: &str, df: Option<f64>) -> Self {
        TestReport {
            method,
            ranking,
            statistic: 0.0,
            reference: reference.to_string(),
            df,
            df2: None,
            p_value: 1.0,
            numerator: None,
            statistic_squared: None,
            contrast_used: None,
            side: None,
            p_increasing: None,
            p_decreasing: None,
            degenerate: false,
            note: None,
        }
    }

    fn degenerate(mut self, why: &str) -> Self {
        self.statistic = 0.0;
        self.p_value = 1.0;
        self.degenerate = true;
        self.note = Some(why.to_string());
        self
    }

    pub fn rejects(&self, alpha: f64) -> bool {
        !self.degenerate && self.p_value < alpha
    }
}

/// Kruskal-Wallis `H = (N-1) Σ n_i (R̄_i - (N+1)/2)^2 / Σ (R_ik - (N+1)/2)^2`
/// with the chosen ranking substituted for `R`, referred to `χ²(d-1)`.
pub fn kruskal_wallis(data: &GroupedData, ranking: RankKind) -> Result<TestReport> {
    let d = data.num_groups();
    let n = data.total();
    if n < d + 1 {
        return Err(Error::invalid(format!(
            "Kruskal-Wallis needs N >= d + 1 observations (N = {n}, d = {d})"
        )));
    }
    let report = TestReport::new(
        Method::KruskalWallis,
        Some(ranking),
        "chi_square",
        Some((d - 1) as f64),
    );
    let r = ranking::rank(data, ranking);
    let center = (n as f64 + 1.0) / 2.0;
    let denom: f64 = r.iter().map(|(_, _, v)| (v - center) * (v - center)).sum();
    let first = data.groups()[0].values[0];
    if data.all_values().all(|v| v == first) || denom <= 0.0 {
        return Ok(report.degenerate("all observations are tied"));
    }
    let num: f64 = r
        .ranks
        .iter()
        .map(|g| g.len() as f64 * (mean(g) - center).powi(2))
        .sum();
    let h = (n as f64 - 1.0) * num / denom;
    Ok(TestReport {
        statistic: h,
        p_value: chi_square_sf((d - 1) as f64, h),
        ..report
    })
}

/// Within-group (pseudo-)rank variances `S_i^2`, requiring `n_i >= 2`.
fn rank_variances(r: &ranking::RankAssignment, what: &str) -> Result<Vec<f64>> {
    r.group_variances()
        .into_iter()
        .map(|v| {
            v.ok_or_else(|| {
                Error::invalid(format!("{what} needs at least two observations per group"))
            })
        })
        .collect()
}

/// Hettmansperger-Norton type trend test on `c'T_d p̂` (or `c'T_d ψ̂`).
///
/// The numerator is studentized with `Σ c*_i^2 S_i^2 / (N^2 n_i)`, where
/// `c* = T_d c` and `S_i^2` is the within-group variance of the ranks used.
pub fn hn_trend(
    data: &GroupedData,
    trend: &[f64],
    ranking: RankKind,
    side: Side,
) -> Result<TestReport> {
    let d = data.num_groups();
    if trend.len() != d {
        return Err(Error::DimensionMismatch {
            what: "trend",
            expected: d,
            got: trend.len(),
        });
    }
    if trend.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("trend vector must be finite"));
    }
    let r = ranking::rank(data, ranking);
    let s2 = rank_variances(&r, "the trend test")?;
    let kind = match ranking {
        RankKind::Ordinary => EffectKind::WeightedP,
        RankKind::Pseudo => EffectKind::UnweightedPsi,
    };
    let est = effects::from_ranks(&r, kind, data.sizes());
    let n = data.total() as f64;
    let c_mean = trend.iter().sum::<f64>() / d as f64;
    let centered: Vec<f64> = trend.iter().map(|c| c - c_mean).collect();
    let numerator: f64 = centered.iter().zip(&est.values).map(|(c, p)| c * p).sum();
    let var: f64 = centered
        .iter()
        .zip(&s2)
        .zip(data.sizes())
        .map(|((c, s), ni)| c * c * s / (n * n * ni as f64))
        .sum();
    let mut report = TestReport::new(Method::HnTrend, Some(ranking), "normal", None);
    report.side = Some(side);
    report.contrast_used = Some(trend.to_vec());
    report.numerator = Some(numerator);
    if !(var > 0.0) {
        return Ok(report.degenerate("zero estimated variance"));
    }
    let z = numerator / var.sqrt();
    let normal = DistributionFunctionSpec::Normal;
    let p_inc = normal.sf(z);
    let p_dec = normal.cdf(z);
    report.statistic = z;
    report.p_increasing = Some(p_inc);
    report.p_decreasing = Some(p_dec);
    report.p_value = match side {
        Side::TwoSided => (2.0 * p_inc.min(p_dec)).min(1.0),
        Side::Increasing => p_inc,
        Side::Decreasing => p_dec,
    };
    Ok(report)
}

fn contrast_vector(data: &GroupedData, contrast: &Contrast) -> Result<Vec<f64>> {
    if contrast.is_named() && !(data.num_groups() == 4 && data.is_factorial()) {
        return Err(Error::invalid(format!(
            "contrast {contrast} needs a 2x2 layout with factor labels"
        )));
    }
    let c = contrast.coefficients();
    if c.len() != data.num_groups() {
        return Err(Error::DimensionMismatch {
            what: "contrast",
            expected: data.num_groups(),
            got: c.len(),
        });
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("contrast vector must be finite"));
    }
    Ok(c)
}

/// Variance components of the rank contrast statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimate {
    /// within-cell (pseudo-)rank variances `S_ij^2`
    pub s2: Vec<f64>,
    /// `σ̂₀² = Σ c_ij² S_ij² / (N n_ij)`, the variance of `T_N(c)`
    pub sigma0_sq: f64,
    /// `S₀² = Σ c_ij² S_ij² / n_ij`
    pub s0_sq: f64,
    /// Satterthwaite-type degrees of freedom
    pub f_hat: f64,
}

pub fn contrast_variance(s2: &[f64], sizes: &[usize], c: &[f64]) -> VarianceEstimate {
    let n: usize = sizes.iter().sum();
    let parts: Vec<f64> = s2
        .iter()
        .zip(sizes)
        .zip(c)
        .map(|((s, &ni), ci)| ci * ci * s / ni as f64)
        .collect();
    let s0_sq: f64 = parts.iter().sum();
    let denom: f64 = parts
        .iter()
        .zip(sizes)
        .map(|(q, &ni)| q * q / (ni as f64 - 1.0))
        .sum();
    VarianceEstimate {
        s2: s2.to_vec(),
        sigma0_sq: s0_sq / n as f64,
        s0_sq,
        f_hat: if denom > 0.0 { s0_sq * s0_sq / denom } else { f64::NAN },
    }
}

/// Rank contrast test `L_N(c) = T_N(c) / σ̂₀` with `T_N(c) = √N c'p̂`,
/// referred to a t distribution with `f̂` degrees of freedom.
pub fn contrast_test(
    data: &GroupedData,
    contrast: &Contrast,
    ranking: RankKind,
) -> Result<TestReport> {
    let c = contrast_vector(data, contrast)?;
    let r = ranking::rank(data, ranking);
    let s2 = rank_variances(&r, "the contrast test")?;
    let sizes = data.sizes();
    let n = data.total() as f64;
    let kind = match ranking {
        RankKind::Ordinary => EffectKind::WeightedP,
        RankKind::Pseudo => EffectKind::UnweightedPsi,
    };
    let est = effects::from_ranks(&r, kind, sizes.clone());
    let numerator: f64 = c.iter().zip(&est.values).map(|(a, b)| a * b).sum();
    let t_n = n.sqrt() * numerator;
    let v = contrast_variance(&s2, &sizes, &c);

    let mut report = TestReport::new(
        Method::Contrast,
        Some(ranking),
        "t",
        Some((data.total() - data.num_groups()) as f64),
    );
    report.numerator = Some(numerator);
    report.contrast_used = Some(c);
    if !(v.sigma0_sq > 0.0) || !v.f_hat.is_finite() {
        return Ok(report.degenerate("zero within-cell rank variance"));
    }
    let l = t_n / v.sigma0_sq.sqrt();
    report.statistic = l;
    report.statistic_squared = Some(l * l);
    report.df = Some(v.f_hat);
    report.p_value = t_two_sided(v.f_hat, l);
    Ok(report)
}

/// Classical contrast F test on cell means with pooled within-cell variance,
/// `F = (c'x̄)^2 / (s_p^2 Σ c_i^2 / n_i)` on `(1, N - d)` degrees of freedom.
pub fn anova_2x2(data: &GroupedData, contrast: &Contrast) -> Result<TestReport> {
    let c = contrast_vector(data, contrast)?;
    let d = data.num_groups();
    let n = data.total();
    let mut ss = 0.0;
    let mut means = Vec::with_capacity(d);
    for g in data.groups() {
        if g.len() < 2 {
            return Err(Error::invalid(
                "the F test needs at least two observations per cell",
            ));
        }
        let var = sample_variance(&g.values).expect("n >= 2");
        ss += var * (g.len() - 1) as f64;
        means.push(mean(&g.values));
    }
    let df2 = (n - d) as f64;
    let pooled = ss / df2;
    let numerator: f64 = c.iter().zip(&means).map(|(a, b)| a * b).sum();
    let mut report = TestReport::new(Method::Anova, None, "f", Some(1.0));
    report.df2 = Some(df2);
    report.numerator = Some(numerator);
    report.contrast_used = Some(c.clone());
    if !(pooled > 0.0) {
        return Ok(report.degenerate("zero pooled within-cell variance"));
    }
    let scale: f64 = c
        .iter()
        .zip(data.sizes())
        .map(|(ci, ni)| ci * ci / ni as f64)
        .sum();
    let f = numerator * numerator / (pooled * scale);
    report.statistic = f;
    report.p_value = DistributionFunctionSpec::F { df1: 1.0, df2 }.sf(f);
    Ok(report)
}
