//! Population-level relative effects and non-centralities.
//!
//! Given the exact distributions `F_1..F_d` and a sample-size allocation this
//! module computes the pairwise effects `w_ri = ∫F_r dF_i`, the weighted
//! effects `p = W'(n/N)`, the unweighted effects `psi = W'(1/d)1`, and the
//! non-centralities of the rank and pseudo-rank statistics. Discrete models
//! whose probabilities are given as exact fractions are additionally
//! evaluated in rational arithmetic.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::special::normal_cdf;

/// A real number that may also carry an exact rational value.
///
/// Deserializes from a JSON number (integers are exact, other numbers are
/// floating point only) or from a string such as `"7/12"` or `"0.25"`,
/// both of which are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    value: f64,
    exact: Option<BigRational>,
}

impl Quantity {
    pub fn float(value: f64) -> Self {
        Quantity { value, exact: None }
    }

    pub fn rational(r: BigRational) -> Self {
        Quantity {
            value: to_f64(&r),
            exact: Some(r),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn fraction(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn is_integer(&self) -> bool {
        self.exact.as_ref().is_some_and(|r| r.is_integer())
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s.trim())
            .map(Quantity::rational)
            .ok_or_else(|| Error::invalid(format!("'{s}' is not a fraction or decimal number")))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n.trim())?;
        let d = parse_rational(d.trim())?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(&digits).ok()?;
    let den = num::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.exact {
            Some(r) if r.is_integer() => match r.to_integer().to_i64() {
                Some(i) => s.serialize_i64(i),
                None => s.serialize_str(&r.to_string()),
            },
            Some(r) => s.serialize_str(&r.to_string()),
            None => s.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Quantity::integer(i)),
            Raw::Float(f) => Ok(Quantity::float(f)),
            Raw::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}

/// Exact model of one distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Discrete {
        support: Vec<f64>,
        probs: Vec<Quantity>,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
}

impl DistributionSpec {
    pub fn normal(mu: f64, sigma: f64) -> Self {
        DistributionSpec::Normal { mu, sigma }
    }

    /// Uniform distribution over the given points, with exact probabilities.
    pub fn uniform_discrete(support: &[f64]) -> Self {
        let mut support = support.to_vec();
        support.sort_by(|a, b| a.partial_cmp(b).expect("finite support"));
        let k = support.len() as i64;
        DistributionSpec::Discrete {
            probs: vec![Quantity::fraction(1, k); support.len()],
            support,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::Normal { mu, sigma } => {
                if !mu.is_finite() || !sigma.is_finite() || *sigma <= 0.0 {
                    return Err(Error::invalid(format!(
                        "normal spec needs finite mu and sigma > 0 (mu = {mu}, sigma = {sigma})"
                    )));
                }
            }
            DistributionSpec::Discrete { support, probs } => {
                if support.is_empty() || support.len() != probs.len() {
                    return Err(Error::invalid(format!(
                        "discrete spec needs matching non-empty support and probs ({} vs {})",
                        support.len(),
                        probs.len()
                    )));
                }
                if support.iter().any(|x| !x.is_finite())
                    || support.windows(2).any(|w| w[0] >= w[1])
                {
                    return Err(Error::invalid(
                        "discrete support must be finite and strictly increasing",
                    ));
                }
                if probs.iter().any(|p| !(p.value() >= 0.0)) {
                    return Err(Error::invalid("discrete probabilities must be non-negative"));
                }
                let total: f64 = probs.iter().map(Quantity::value).sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(format!(
                        "discrete probabilities sum to {total}, not 1"
                    )));
                }
                if let Some(exact) = exact_probs(probs) {
                    let s: BigRational = exact.iter().cloned().sum();
                    if !s.is_one() {
                        return Err(Error::invalid(format!(
                            "exact discrete probabilities sum to {s}, not 1"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            DistributionSpec::Normal { mu, .. } => *mu,
            DistributionSpec::Discrete { support, probs } => support
                .iter()
                .zip(probs)
                .map(|(x, p)| x * p.value())
                .sum(),
        }
    }
}

fn exact_probs(probs: &[Quantity]) -> Option<Vec<BigRational>> {
    probs.iter().map(|p| p.exact().cloned()).collect()
}

/// `w = P(X_r < X_i) + P(X_r = X_i)/2` for `X_r ~ f_r`, `X_i ~ f_i`.
pub fn exact_w(f_r: &DistributionSpec, f_i: &DistributionSpec) -> f64 {
    use DistributionSpec::*;
    match (f_r, f_i) {
        (Normal { mu: mr, sigma: sr }, Normal { mu: mi, sigma: si }) => {
            normal_cdf((mi - mr) / (sr * sr + si * si).sqrt())
        }
        (Discrete { support, probs }, Normal { mu, sigma }) => support
            .iter()
            .zip(probs)
            .map(|(a, p)| p.value() * normal_cdf((mu - a) / sigma))
            .sum(),
        (Normal { mu, sigma }, Discrete { support, probs }) => support
            .iter()
            .zip(probs)
            .map(|(b, q)| q.value() * normal_cdf((b - mu) / sigma))
            .sum(),
        (
            Discrete {
                support: sr,
                probs: pr,
            },
            Discrete {
                support: si,
                probs: pi,
            },
        ) => {
            let mut w = 0.0;
            for (b, q) in si.iter().zip(pi) {
                for (a, p) in sr.iter().zip(pr) {
                    w += p.value() * q.value() * crate::ranking::count(b - a);
                }
            }
            w
        }
    }
}

/// Rational `w` when both specs are discrete with exact probabilities.
pub fn exact_w_rational(f_r: &DistributionSpec, f_i: &DistributionSpec) -> Option<BigRational> {
    let (
        DistributionSpec::Discrete {
            support: sr,
            probs: pr,
        },
        DistributionSpec::Discrete {
            support: si,
            probs: pi,
        },
    ) = (f_r, f_i)
    else {
        return None;
    };
    let pr = exact_probs(pr)?;
    let pi = exact_probs(pi)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut w = BigRational::zero();
    for (b, q) in si.iter().zip(&pi) {
        for (a, p) in sr.iter().zip(&pr) {
            if a < b {
                w += p * q;
            } else if a == b {
                w += p * q * &half;
            }
        }
    }
    Some(w)
}

/// Group sizes, either absolute counts or relative shares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Allocation(pub Vec<Quantity>);

impl Allocation {
    pub fn counts(n: &[u64]) -> Self {
        Allocation(n.iter().map(|&k| Quantity::integer(k as i64)).collect())
    }

    pub fn fractions(f: &[(i64, i64)]) -> Self {
        Allocation(f.iter().map(|&(a, b)| Quantity::fraction(a, b)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.iter().any(|q| !(q.value() > 0.0) || !q.value().is_finite()) {
            return Err(Error::invalid("allocation entries must be positive"));
        }
        Ok(())
    }

    pub fn relative(&self) -> Vec<f64> {
        let total: f64 = self.0.iter().map(Quantity::value).sum();
        self.0.iter().map(|q| q.value() / total).collect()
    }

    pub fn relative_exact(&self) -> Option<Vec<BigRational>> {
        let exact = exact_probs(&self.0)?;
        let total: BigRational = exact.iter().cloned().sum();
        Some(exact.iter().map(|q| q / &total).collect())
    }

    /// Total sample size when every entry is an integer count.
    pub fn absolute_total(&self) -> Option<u64> {
        if self.0.iter().all(Quantity::is_integer) {
            Some(self.0.iter().map(|q| q.value() as u64).sum())
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactEffects {
    pub w: Vec<Vec<String>>,
    pub p: Vec<String>,
    pub psi: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationEffects {
    /// `w[r][i] = ∫F_r dF_i`
    pub w: Vec<Vec<f64>>,
    pub p: Vec<f64>,
    pub psi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactEffects>,
}

struct RationalEffects {
    w: Vec<Vec<BigRational>>,
    p: Vec<BigRational>,
    psi: Vec<BigRational>,
}

fn check_specs(specs: &[DistributionSpec], alloc: &Allocation) -> Result<()> {
    if specs.len() < 2 {
        return Err(Error::invalid("at least two distributions are required"));
    }
    if alloc.len() != specs.len() {
        return Err(Error::DimensionMismatch {
            what: "allocation",
            expected: specs.len(),
            got: alloc.len(),
        });
    }
    for s in specs {
        s.validate()?;
    }
    alloc.validate()
}

fn rational_effects(specs: &[DistributionSpec], alloc: &Allocation) -> Option<RationalEffects> {
    let d = specs.len();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut w = vec![vec![half.clone(); d]; d];
    for r in 0..d {
        for i in (r + 1)..d {
            let v = exact_w_rational(&specs[r], &specs[i])?;
            w[i][r] = BigRational::one() - &v;
            w[r][i] = v;
        }
    }
    let a = alloc.relative_exact()?;
    let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));
    let p = (0..d)
        .map(|i| (0..d).map(|r| &a[r] * &w[r][i]).sum())
        .collect();
    let psi = (0..d)
        .map(|i| (0..d).map(|r| &w[r][i]).sum::<BigRational>() * &inv_d)
        .collect();
    Some(RationalEffects { w, p, psi })
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn exact_effects(specs: &[DistributionSpec], alloc: &Allocation) -> Result<PopulationEffects> {
    check_specs(specs, alloc)?;
    let d = specs.len();
    let mut w = vec![vec![0.5; d]; d];
    for r in 0..d {
        for i in (r + 1)..d {
            let v = exact_w(&specs[r], &specs[i]);
            w[r][i] = v;
            w[i][r] = 1.0 - v;
        }
    }
    let rational = rational_effects(specs, alloc);
    if let Some(re) = &rational {
        // replace float w by the correctly rounded rational values
        for r in 0..d {
            for i in 0..d {
                w[r][i] = to_f64(&re.w[r][i]);
            }
        }
    }
    let a = alloc.relative();
    let (p, psi) = match &rational {
        Some(re) => (
            re.p.iter().map(to_f64).collect(),
            re.psi.iter().map(to_f64).collect(),
        ),
        None => (
            (0..d)
                .map(|i| (0..d).map(|r| a[r] * w[r][i]).sum())
                .collect(),
            (0..d)
                .map(|i| (0..d).map(|r| w[r][i]).sum::<f64>() / d as f64)
                .collect(),
        ),
    };
    let exact = rational.map(|re| ExactEffects {
        w: re.w.iter().map(|row| strings(row)).collect(),
        p: strings(&re.p),
        psi: strings(&re.psi),
    });
    Ok(PopulationEffects { w, p, psi, exact })
}

/// `v' T_d v` with the centering matrix `T_d = I - J/d`.
pub fn centered_quadratic(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - m) * (x - m)).sum()
}

/// `c' T_d v`.
pub fn centered_linear(c: &[f64], v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    c.iter().zip(v).map(|(ci, vi)| ci * (vi - m)).sum()
}

pub fn dot(c: &[f64], v: &[f64]) -> f64 {
    c.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn rational_centered_quadratic(v: &[BigRational]) -> BigRational {
    let m = v.iter().cloned().sum::<BigRational>() / BigRational::from_integer(BigInt::from(v.len()));
    v.iter().map(|x| (x - &m) * (x - &m)).sum()
}

fn rational_centered_linear(c: &[BigRational], v: &[BigRational]) -> BigRational {
    let m = v.iter().cloned().sum::<BigRational>() / BigRational::from_integer(BigInt::from(v.len()));
    c.iter().zip(v).map(|(ci, vi)| ci * (vi - &m)).sum()
}

fn rational_dot(c: &[BigRational], v: &[BigRational]) -> BigRational {
    c.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Optional trend / contrast vectors and total size for [`noncentralities`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NonCentralityRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trend: Option<Vec<Quantity>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrast: Option<Vec<Quantity>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_total: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactNonCentralities {
    pub p: Vec<String>,
    pub psi: Vec<String>,
    pub c_p: String,
    pub c_psi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_hn: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_hn_psi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_contrast_p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_contrast_psi: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonCentralityReport {
    pub allocation: Vec<f64>,
    pub p: Vec<f64>,
    pub psi: Vec<f64>,
    /// `p' T_d p`
    pub c_p: f64,
    /// `psi' T_d psi`
    pub c_psi: f64,
    /// `c' T_d p` for the trend vector
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_hn: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_hn_psi: Option<f64>,
    /// `c' p` for the contrast vector
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_contrast_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_contrast_psi: Option<f64>,
    /// `c' mu` when every distribution has a mean (always, for normal and
    /// discrete specs)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_contrast_mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_total: Option<u64>,
    /// `N * c_p`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_c_p: Option<f64>,
    /// `sqrt(N)` times the contrast non-centrality if a contrast was given,
    /// otherwise times the trend non-centrality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sqrt_n_scaled: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactNonCentralities>,
}

fn check_vector(what: &'static str, v: &Option<Vec<Quantity>>, d: usize) -> Result<()> {
    if let Some(v) = v {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                what,
                expected: d,
                got: v.len(),
            });
        }
        if v.iter().any(|q| !q.value().is_finite()) {
            return Err(Error::invalid(format!("{what} vector must be finite")));
        }
    }
    Ok(())
}

fn values(v: &[Quantity]) -> Vec<f64> {
    v.iter().map(Quantity::value).collect()
}

pub fn noncentralities(
    specs: &[DistributionSpec],
    alloc: &Allocation,
    request: &NonCentralityRequest,
) -> Result<NonCentralityReport> {
    let d = specs.len();
    check_vector("trend", &request.trend, d)?;
    check_vector("contrast", &request.contrast, d)?;
    let eff = exact_effects(specs, alloc)?;
    let trend = request.trend.as_deref().map(values);
    let contrast = request.contrast.as_deref().map(values);

    let c_hn = trend.as_ref().map(|c| centered_linear(c, &eff.p));
    let c_hn_psi = trend.as_ref().map(|c| centered_linear(c, &eff.psi));
    let c_contrast_p = contrast.as_ref().map(|c| dot(c, &eff.p));
    let c_contrast_psi = contrast.as_ref().map(|c| dot(c, &eff.psi));
    let means: Vec<f64> = specs.iter().map(DistributionSpec::mean).collect();
    let c_contrast_mu = contrast.as_ref().map(|c| dot(c, &means));

    let n_total = request.n_total.or_else(|| alloc.absolute_total());
    let c_p = centered_quadratic(&eff.p);
    let n_c_p = n_total.map(|n| n as f64 * c_p);
    let sqrt_n_scaled = n_total.and_then(|n| {
        let root = (n as f64).sqrt();
        c_contrast_p.or(c_hn).map(|c| root * c)
    });

    let exact = rational_effects(specs, alloc).map(|re| {
        let exact_vec = |v: &Option<Vec<Quantity>>| -> Option<Vec<BigRational>> {
            v.as_ref().and_then(|v| exact_probs(v))
        };
        let trend_q = exact_vec(&request.trend);
        let contrast_q = exact_vec(&request.contrast);
        ExactNonCentralities {
            p: strings(&re.p),
            psi: strings(&re.psi),
            c_p: rational_centered_quadratic(&re.p).to_string(),
            c_psi: rational_centered_quadratic(&re.psi).to_string(),
            c_hn: trend_q
                .as_ref()
                .map(|c| rational_centered_linear(c, &re.p).to_string()),
            c_hn_psi: trend_q
                .as_ref()
                .map(|c| rational_centered_linear(c, &re.psi).to_string()),
            c_contrast_p: contrast_q.as_ref().map(|c| rational_dot(c, &re.p).to_string()),
            c_contrast_psi: contrast_q
                .as_ref()
                .map(|c| rational_dot(c, &re.psi).to_string()),
        }
    });

    Ok(NonCentralityReport {
        allocation: alloc.relative(),
        c_p,
        c_psi: centered_quadratic(&eff.psi),
        p: eff.p,
        psi: eff.psi,
        c_hn,
        c_hn_psi,
        c_contrast_p,
        c_contrast_psi,
        c_contrast_mu,
        n_total,
        n_c_p,
        sqrt_n_scaled,
        exact,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupRow {
    pub n11: u64,
    pub n12: u64,
    pub n21: u64,
    pub n22: u64,
    pub n_total: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_mu: Option<f64>,
    pub c_psi: f64,
    pub c_p: f64,
    pub sqrt_n_c_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupTable {
    pub rows: Vec<SubgroupRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Contrast non-centralities for a 2x2 design whose first stratum
/// (`n11 = n12`) grows while the second stays at `fixed = (n21, n22)`.
pub fn subgroup_table(
    specs: &[DistributionSpec],
    fixed: (u64, u64),
    growing: &[u64],
    contrast: &[f64],
) -> Result<SubgroupTable> {
    if specs.len() != 4 {
        return Err(Error::DimensionMismatch {
            what: "2x2 distributions",
            expected: 4,
            got: specs.len(),
        });
    }
    if contrast.len() != 4 {
        return Err(Error::DimensionMismatch {
            what: "contrast",
            expected: 4,
            got: contrast.len(),
        });
    }
    let all_normal = specs
        .iter()
        .all(|s| matches!(s, DistributionSpec::Normal { .. }));
    let c_mu = all_normal.then(|| {
        let means: Vec<f64> = specs.iter().map(DistributionSpec::mean).collect();
        dot(contrast, &means)
    });
    let rows = growing
        .iter()
        .map(|&m| {
            let alloc = Allocation::counts(&[m, m, fixed.0, fixed.1]);
            let eff = exact_effects(specs, &alloc)?;
            let n_total = 2 * m + fixed.0 + fixed.1;
            let c_p = dot(contrast, &eff.p);
            Ok(SubgroupRow {
                n11: m,
                n12: m,
                n21: fixed.0,
                n22: fixed.1,
                n_total,
                c_mu,
                c_psi: dot(contrast, &eff.psi),
                c_p,
                sqrt_n_c_p: (n_total as f64).sqrt() * c_p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let note = (!all_normal)
        .then(|| "c_mu omitted: not every distribution is normal".to_string());
    Ok(SubgroupTable { rows, note })
}

/// Rational helper used by tests and reports.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Absolute value of a rational as `f64`, mostly for diagnostics.
pub fn rational_abs(r: &BigRational) -> f64 {
    to_f64(&r.abs())
}
