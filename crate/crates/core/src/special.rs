//! Distribution functions for the normal, Student-t, chi-square and F
//! families, built on the regularized incomplete gamma and beta functions.
//!
//! Quantiles of the t, chi-square and F families are found by bracketing and
//! bisection on the distribution function. The normal quantile starts from
//! Acklam's rational approximation and is polished with Halley steps against
//! the accurate CDF.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma `P(a, x)` and its complement `Q(a, x)`.
fn gamma_pq(a: f64, x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    let log_prefactor = -x + a * x.ln() - ln_gamma(a);
    if x < a + 1.0 {
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        let p = (sum.ln() + log_prefactor).exp();
        (p, 1.0 - p)
    } else {
        // modified Lentz continued fraction for Q
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        let q = (h.ln() + log_prefactor).exp();
        (1.0 - q, q)
    }
}

pub fn gamma_p(a: f64, x: f64) -> f64 {
    gamma_pq(a, x).0
}

pub fn gamma_q(a: f64, x: f64) -> f64 {
    gamma_pq(a, x).1
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`; `y` must equal `1 - x` and is
/// passed separately so callers can supply it without cancellation.
pub fn inc_beta(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let log_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * y.ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        (log_front + beta_cf(a, b, x).ln() - a.ln()).exp()
    } else {
        1.0 - (log_front + beta_cf(b, a, y).ln() - b.ln()).exp()
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    let half_sq = 0.5 * z * z;
    let (p, q) = gamma_pq(0.5, half_sq);
    if z < 0.0 {
        0.5 * q
    } else {
        0.5 + 0.5 * p
    }
}

/// Upper tail `1 - Φ(z)` without cancellation.
pub fn normal_sf(z: f64) -> f64 {
    normal_cdf(-z)
}

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const LOW: f64 = 0.024_25;
    if p < LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Standard normal quantile for `p` in `(0, 1)`.
pub fn normal_quantile(p: f64) -> f64 {
    let mut x = acklam(p);
    for _ in 0..2 {
        // Halley step on Φ(x) - p, working in the smaller tail
        let e = if x < 0.0 {
            normal_cdf(x) - p
        } else {
            (1.0 - p) - normal_sf(x)
        };
        let pdf = normal_pdf(x);
        if pdf == 0.0 {
            break;
        }
        let u = e / pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

fn t_cdf(df: f64, t: f64) -> f64 {
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    let t2 = t * t;
    let x = df / (df + t2);
    let y = t2 / (df + t2);
    let tail = 0.5 * inc_beta(0.5 * df, 0.5, x, y);
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

fn chi_square_cdf(df: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        gamma_p(0.5 * df, 0.5 * x)
    }
}

fn f_cdf(d1: f64, d2: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let denom = d1 * x + d2;
    inc_beta(0.5 * d1, 0.5 * d2, d1 * x / denom, d2 / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionFunctionSpec {
    Normal,
    StudentT { df: f64 },
    ChiSquare { df: f64 },
    F { df1: f64, df2: f64 },
}

impl DistributionFunctionSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DistributionFunctionSpec::Normal => true,
            DistributionFunctionSpec::StudentT { df } | DistributionFunctionSpec::ChiSquare { df } => {
                df > 0.0 && df.is_finite()
            }
            DistributionFunctionSpec::F { df1, df2 } => {
                df1 > 0.0 && df2 > 0.0 && df1.is_finite() && df2.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "degrees of freedom must be positive and finite: {self:?}"
            )))
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let v = match *self {
            DistributionFunctionSpec::Normal => normal_cdf(x),
            DistributionFunctionSpec::StudentT { df } => t_cdf(df, x),
            DistributionFunctionSpec::ChiSquare { df } => chi_square_cdf(df, x),
            DistributionFunctionSpec::F { df1, df2 } => f_cdf(df1, df2, x),
        };
        v.clamp(0.0, 1.0)
    }

    /// Survival function `1 - cdf(x)`, computed from the upper tail directly.
    pub fn sf(&self, x: f64) -> f64 {
        let v = match *self {
            DistributionFunctionSpec::Normal => normal_sf(x),
            DistributionFunctionSpec::StudentT { df } => t_cdf(df, -x),
            DistributionFunctionSpec::ChiSquare { df } => {
                if x <= 0.0 {
                    1.0
                } else {
                    gamma_q(0.5 * df, 0.5 * x)
                }
            }
            DistributionFunctionSpec::F { df1, df2 } => {
                if x <= 0.0 {
                    1.0
                } else {
                    let denom = df1 * x + df2;
                    inc_beta(0.5 * df2, 0.5 * df1, df2 / denom, df1 * x / denom)
                }
            }
        };
        v.clamp(0.0, 1.0)
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::invalid(format!(
                "quantile level must lie in (0, 1), got {q}"
            )));
        }
        self.validate()?;
        Ok(match *self {
            DistributionFunctionSpec::Normal => normal_quantile(q),
            DistributionFunctionSpec::StudentT { .. } => {
                if q == 0.5 {
                    0.0
                } else if q < 0.5 {
                    -self.bracketed(1.0 - q, 0.0)
                } else {
                    self.bracketed(q, 0.0)
                }
            }
            _ => self.bracketed(q, 0.0),
        })
    }

    /// Bisection on `[lower, hi]` with `hi` doubled until it brackets `q`.
    /// Works on the upper tail when `q > 1/2` so that levels close to one
    /// keep their precision.
    fn bracketed(&self, q: f64, lower: f64) -> f64 {
        let upper_tail = q > 0.5;
        let target = if upper_tail { 1.0 - q } else { q };
        // f(x) increasing in x
        let f = |x: f64| {
            if upper_tail {
                target - self.sf(x)
            } else {
                self.cdf(x) - target
            }
        };
        let mut lo = lower;
        let mut hi = lower.max(0.0) + 1.0;
        while f(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        for _ in 0..1100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

pub fn chi_square_sf(df: f64, x: f64) -> f64 {
    DistributionFunctionSpec::ChiSquare { df }.sf(x)
}

pub fn t_two_sided(df: f64, t: f64) -> f64 {
    (2.0 * DistributionFunctionSpec::StudentT { df }.sf(t.abs())).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ln_gamma_integers() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert_abs_diff_eq!(ln_gamma(n as f64), fact.ln(), epsilon = 1e-12);
            fact *= n as f64;
        }
        assert_abs_diff_eq!(
            ln_gamma(0.5),
            std::f64::consts::PI.sqrt().ln(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn normal_basics() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_abs_diff_eq!(normal_quantile(0.975), 1.959_963_984_540_054, epsilon = 1e-12);
        assert_abs_diff_eq!(normal_quantile(0.5), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn t_limits_and_symmetry() {
        let t = DistributionFunctionSpec::StudentT { df: 5.0 };
        assert_eq!(t.quantile(0.5).unwrap(), 0.0);
        let big = DistributionFunctionSpec::StudentT { df: 1e6 };
        assert_abs_diff_eq!(big.cdf(1.96), normal_cdf(1.96), epsilon = 1e-4);
    }

    #[test]
    fn chi_square_two_df_closed_form() {
        let c = DistributionFunctionSpec::ChiSquare { df: 2.0 };
        assert_abs_diff_eq!(c.quantile(0.95).unwrap(), -2.0 * 0.05f64.ln(), epsilon = 1e-9);
        for x in [0.1, 1.0, 3.0, 10.0] {
            assert_abs_diff_eq!(c.cdf(x), 1.0 - (-x / 2.0).exp(), epsilon = 1e-14);
        }
    }

    #[test]
    fn quantile_rejects_bad_levels() {
        let n = DistributionFunctionSpec::Normal;
        assert!(n.quantile(0.0).is_err());
        assert!(n.quantile(1.0).is_err());
        assert!(n.quantile(f64::NAN).is_err());
        assert!(DistributionFunctionSpec::StudentT { df: -1.0 }.quantile(0.3).is_err());
    }

    #[test]
    fn f_with_one_numerator_df_is_squared_t() {
        let f = DistributionFunctionSpec::F { df1: 1.0, df2: 7.0 };
        for t in [0.3, 1.0, 2.5] {
            assert_abs_diff_eq!(f.sf(t * t), t_two_sided(7.0, t), epsilon = 1e-12);
        }
    }
}
