//! Seeded Monte Carlo engine.
//!
//! Replication `k` of a plan draws all of its observations from a ChaCha8
//! stream keyed by `(seed, k)`, so results do not depend on how replications
//! are scheduled across threads. Per-replication outcomes are collected in
//! index order and reduced sequentially.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, Allocation, DistributionSpec};
use crate::confidence::{effect_intervals, IntervalOptions};
use crate::data::GroupedData;
use crate::effects::EffectKind;
use crate::error::{Error, Result};
use crate::hypothesis::{self, Contrast, Side, TestReport};
use crate::ranking::RankKind;
use crate::special::normal_quantile;

/// Independent random stream for replication `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `n` observations from `spec` (inverse-CDF in both cases).
pub fn sample<R: Rng + ?Sized>(spec: &DistributionSpec, n: usize, rng: &mut R) -> Vec<f64> {
    match spec {
        DistributionSpec::Discrete { support, probs } => {
            let mut cum = Vec::with_capacity(probs.len());
            let mut acc = 0.0;
            for p in probs {
                acc += p.value();
                cum.push(acc);
            }
            (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    let k = cum.partition_point(|&c| c <= u).min(support.len() - 1);
                    support[k]
                })
                .collect()
        }
        DistributionSpec::Normal { mu, sigma } => (0..n)
            .map(|_| {
                let mut u: f64 = rng.random();
                while u == 0.0 {
                    u = rng.random();
                }
                mu + sigma * normal_quantile(u)
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestSpec {
    KruskalWallis {
        ranking: RankKind,
    },
    HnTrend {
        ranking: RankKind,
        trend: Vec<f64>,
        #[serde(default)]
        side: Side,
    },
    Contrast {
        ranking: RankKind,
        contrast: Contrast,
    },
    Anova {
        contrast: Contrast,
    },
    /// Interval estimation; only meaningful with [`Metric::Coverage`].
    Interval {
        kind: EffectKind,
        level: f64,
        #[serde(default)]
        logit: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    RejectionRate,
    SignFrequency,
    Coverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationPlan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub specs: Vec<DistributionSpec>,
    /// absolute group sizes
    pub sizes: Vec<usize>,
    pub test: TestSpec,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub reps: u64,
    pub seed: u64,
    pub metric: Metric,
    /// keep one summary line per replication in the result
    #[serde(default)]
    pub keep_replications: bool,
}

fn default_alpha() -> f64 {
    0.05
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        let d = self.specs.len();
        if d < 2 {
            return Err(Error::invalid("a plan needs at least two distributions"));
        }
        for s in &self.specs {
            s.validate()?;
        }
        if self.sizes.len() != d {
            return Err(Error::DimensionMismatch {
                what: "sizes",
                expected: d,
                got: self.sizes.len(),
            });
        }
        if self.sizes.contains(&0) {
            return Err(Error::invalid("group sizes must be at least 1"));
        }
        if self.reps == 0 {
            return Err(Error::invalid("reps must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        let need_pairs = !matches!(self.test, TestSpec::KruskalWallis { .. });
        if need_pairs && self.sizes.iter().any(|&n| n < 2) {
            return Err(Error::invalid("this test needs at least two observations per group"));
        }
        match (&self.test, self.metric) {
            (TestSpec::Interval { .. }, Metric::Coverage) => {}
            (TestSpec::Interval { .. }, _) | (_, Metric::Coverage) => {
                return Err(Error::invalid(
                    "the coverage metric pairs with an interval test and vice versa",
                ))
            }
            (TestSpec::KruskalWallis { .. }, Metric::SignFrequency) => {
                return Err(Error::invalid("Kruskal-Wallis has no signed numerator"))
            }
            _ => {}
        }
        match &self.test {
            TestSpec::HnTrend { trend, .. } if trend.len() != d => {
                return Err(Error::DimensionMismatch {
                    what: "trend",
                    expected: d,
                    got: trend.len(),
                })
            }
            TestSpec::Contrast { contrast, .. } | TestSpec::Anova { contrast } => {
                let c = contrast.coefficients();
                if c.len() != d {
                    return Err(Error::DimensionMismatch {
                        what: "contrast",
                        expected: d,
                        got: c.len(),
                    });
                }
            }
            TestSpec::Interval { level, .. } if !(*level > 0.5 && *level < 1.0) => {
                return Err(Error::invalid("interval level must lie in (0.5, 1)"))
            }
            _ => {}
        }
        Ok(())
    }

    /// Samples the data set of replication `index`.
    pub fn draw(&self, index: u64) -> Result<GroupedData> {
        let mut rng = substream(self.seed, index);
        let samples: Vec<Vec<f64>> = self
            .specs
            .iter()
            .zip(&self.sizes)
            .map(|(s, &n)| sample(s, n, &mut rng))
            .collect();
        if samples.len() == 4 {
            let cells: [Vec<f64>; 4] = samples.try_into().expect("four cells");
            GroupedData::factorial(cells)
        } else {
            GroupedData::from_values(samples)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub index: u64,
    /// absent for interval replications
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<f64>,
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covered: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub metric: Metric,
    pub seed: u64,
    pub reps: u64,
    /// rejection rate, positive-sign frequency, or mean coverage over groups
    pub value: f64,
    /// Monte Carlo standard error of `value`
    pub mc_se: f64,
    /// per-group coverage
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values_mc_se: Option<Vec<f64>>,
    /// analytic target of the intervals (coverage only)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_numerator: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator_se: Option<f64>,
    pub degenerate: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<Vec<ReplicationSummary>>,
}

impl SimulationResult {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "metric", "seed", "reps", "group", "value", "mc_se", "degenerate"])?;
        let name = self.name.clone().unwrap_or_default();
        let metric = match self.metric {
            Metric::RejectionRate => "rejection_rate",
            Metric::SignFrequency => "sign_frequency",
            Metric::Coverage => "coverage",
        };
        let mut row = |group: String, value: f64, se: f64| {
            w.write_record([
                name.clone(),
                metric.to_string(),
                self.seed.to_string(),
                self.reps.to_string(),
                group,
                value.to_string(),
                se.to_string(),
                self.degenerate.to_string(),
            ])
        };
        row("all".to_string(), self.value, self.mc_se)?;
        if let (Some(v), Some(se)) = (&self.values, &self.values_mc_se) {
            for (i, (a, b)) in v.iter().zip(se).enumerate() {
                row((i + 1).to_string(), *a, *b)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::invalid(format!("csv buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn run_test(plan: &SimulationPlan, data: &GroupedData) -> Result<TestReport> {
    match &plan.test {
        TestSpec::KruskalWallis { ranking } => hypothesis::kruskal_wallis(data, *ranking),
        TestSpec::HnTrend {
            ranking,
            trend,
            side,
        } => hypothesis::hn_trend(data, trend, *ranking, *side),
        TestSpec::Contrast { ranking, contrast } => {
            hypothesis::contrast_test(data, contrast, *ranking)
        }
        TestSpec::Anova { contrast } => hypothesis::anova_2x2(data, contrast),
        TestSpec::Interval { .. } => unreachable!("intervals are handled by the coverage path"),
    }
}

fn replicate(plan: &SimulationPlan, index: u64, target: Option<&[f64]>) -> Result<ReplicationSummary> {
    let data = plan.draw(index)?;
    if let TestSpec::Interval { kind, level, logit } = &plan.test {
        let rep = effect_intervals(&data, *level, *kind, IntervalOptions { logit: *logit })?;
        let target = target.expect("coverage target");
        let covered = rep
            .intervals
            .iter()
            .zip(target)
            .map(|(g, t)| g.lower <= *t && *t <= g.upper)
            .collect();
        return Ok(ReplicationSummary {
            index,
            statistic: None,
            p_value: None,
            numerator: None,
            degenerate: false,
            covered: Some(covered),
        });
    }
    let r = run_test(plan, &data)?;
    Ok(ReplicationSummary {
        index,
        statistic: Some(r.statistic),
        p_value: Some(r.p_value),
        numerator: r.numerator,
        degenerate: r.degenerate,
        covered: None,
    })
}

fn rate_se(rate: f64, reps: u64) -> f64 {
    (rate * (1.0 - rate) / reps as f64).sqrt()
}

/// Runs the plan on the global rayon pool.
pub fn run(plan: &SimulationPlan) -> Result<SimulationResult> {
    plan.validate()?;
    let target = match &plan.test {
        TestSpec::Interval { kind, .. } => {
            let alloc = Allocation::counts(
                &plan.sizes.iter().map(|&n| n as u64).collect::<Vec<_>>(),
            );
            let eff = analytic::exact_effects(&plan.specs, &alloc)?;
            Some(match kind {
                EffectKind::UnweightedPsi => eff.psi,
                EffectKind::WeightedP => eff.p,
            })
        }
        _ => None,
    };
    let outcomes: Vec<ReplicationSummary> = (0..plan.reps)
        .into_par_iter()
        .map(|k| replicate(plan, k, target.as_deref()))
        .collect::<Result<_>>()?;
    Ok(summarize(plan, outcomes, target))
}

/// Runs the plan on a dedicated pool with `threads` workers.
pub fn run_with_threads(plan: &SimulationPlan, threads: usize) -> Result<SimulationResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| run(plan))
}

fn summarize(
    plan: &SimulationPlan,
    outcomes: Vec<ReplicationSummary>,
    target: Option<Vec<f64>>,
) -> SimulationResult {
    let reps = plan.reps;
    let degenerate = outcomes.iter().filter(|o| o.degenerate).count() as u64;
    let mut result = SimulationResult {
        version: crate::VERSION.to_string(),
        name: plan.name.clone(),
        metric: plan.metric,
        seed: plan.seed,
        reps,
        value: 0.0,
        mc_se: 0.0,
        values: None,
        values_mc_se: None,
        target: None,
        mean_numerator: None,
        numerator_se: None,
        degenerate,
        replications: None,
    };
    match plan.metric {
        Metric::RejectionRate => {
            let hits = outcomes
                .iter()
                .filter(|o| !o.degenerate && o.p_value.is_some_and(|p| p < plan.alpha))
                .count();
            result.value = hits as f64 / reps as f64;
            result.mc_se = rate_se(result.value, reps);
        }
        Metric::SignFrequency => {
            let positive = outcomes
                .iter()
                .filter(|o| o.numerator.is_some_and(|x| x > 0.0))
                .count();
            result.value = positive as f64 / reps as f64;
            result.mc_se = rate_se(result.value, reps);
        }
        Metric::Coverage => {
            let d = plan.specs.len();
            let mut counts = vec![0u64; d];
            for o in &outcomes {
                for (c, hit) in counts.iter_mut().zip(o.covered.as_deref().unwrap_or(&[])) {
                    *c += u64::from(*hit);
                }
            }
            let values: Vec<f64> = counts.iter().map(|&c| c as f64 / reps as f64).collect();
            result.value = values.iter().sum::<f64>() / d as f64;
            result.mc_se = rate_se(result.value, reps * d as u64);
            result.values_mc_se = Some(values.iter().map(|&v| rate_se(v, reps)).collect());
            result.values = Some(values);
            result.target = target;
        }
    }
    let nums: Vec<f64> = outcomes.iter().filter_map(|o| o.numerator).collect();
    if nums.len() > 1 {
        let m = nums.iter().sum::<f64>() / nums.len() as f64;
        let var = nums.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (nums.len() - 1) as f64;
        result.mean_numerator = Some(m);
        result.numerator_se = Some((var / nums.len() as f64).sqrt());
    }
    if plan.keep_replications {
        result.replications = Some(outcomes);
    }
    result
}
