//! Distribution functions against frozen reference values and closed forms.

use pseudorank::special::{
    gamma_p, gamma_q, inc_beta, ln_gamma, normal_cdf, normal_quantile, normal_sf,
    DistributionFunctionSpec as D,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300) || (a - b).abs() < 1e-15
}

#[test]
fn frozen_cdf_values() {
    let cases = [
        (D::StudentT { df: 3.0 }, 1.5, 0.884_708_067_377_588_6),
        (D::StudentT { df: 17.5 }, -2.2, 0.020_752_287_114_369_116),
        (D::ChiSquare { df: 4.5 }, 3.3, 0.415_565_251_159_501_8),
        (D::F { df1: 3.0, df2: 7.5 }, 2.1, 0.816_650_268_334_875_4),
        (D::Normal, -1.767_766_952_966_368_8, 0.038_549_935_871_770_885),
    ];
    for (spec, x, want) in cases {
        let got = spec.cdf(x);
        assert!(close(got, want, 1e-10), "{spec:?} at {x}: {got} vs {want}");
        assert!(close(spec.sf(x), 1.0 - want, 1e-10));
    }
}

#[test]
fn frozen_quantiles() {
    let cases = [
        (D::StudentT { df: 4.0 }, 0.975, 2.776_445_105_197_798_7),
        (D::F { df1: 1.0, df2: 96.0 }, 0.95, 3.940_162_716_990_277_8),
        (D::ChiSquare { df: 10.0 }, 0.99, 23.209_251_158_954_356),
        (D::Normal, 0.975, 1.959_963_984_540_054),
    ];
    for (spec, q, want) in cases {
        let got = spec.quantile(q).unwrap();
        assert!(close(got, want, 1e-9), "{spec:?} at {q}: {got} vs {want}");
    }
}

#[test]
fn cauchy_closed_form() {
    let t1 = D::StudentT { df: 1.0 };
    for k in -40..=40 {
        let x = k as f64 / 4.0;
        let want = 0.5 + x.atan() / std::f64::consts::PI;
        assert!((t1.cdf(x) - want).abs() < 1e-12);
    }
}

#[test]
fn exponential_and_chi_square_two() {
    // χ²(2) is exponential with mean 2
    for k in 0..50 {
        let x = k as f64 * 0.37;
        let want = 1.0 - (-x / 2.0).exp();
        assert!((D::ChiSquare { df: 2.0 }.cdf(x) - want).abs() < 1e-13);
        assert!((gamma_p(1.0, x) - (1.0 - (-x).exp())).abs() < 1e-13);
    }
}

#[test]
fn gamma_function_values() {
    assert!(ln_gamma(1.0).abs() < 1e-14);
    assert!(ln_gamma(2.0).abs() < 1e-14);
    assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    let mut f = 1.0f64;
    for n in 1..30 {
        f *= n as f64;
        assert!((ln_gamma(n as f64 + 1.0) - f.ln()).abs() < 1e-12 * f.ln().max(1.0));
    }
    for a in [0.3, 1.0, 4.5, 30.0] {
        for x in [0.01, 0.5, 3.0, 40.0] {
            assert!((gamma_p(a, x) + gamma_q(a, x) - 1.0).abs() < 1e-13);
        }
    }
}

#[test]
fn incomplete_beta_symmetry() {
    for (a, b) in [(0.5, 0.5), (2.0, 3.0), (10.0, 0.7)] {
        for k in 1..20 {
            let x = k as f64 / 20.0;
            let lhs = inc_beta(a, b, x, 1.0 - x);
            let rhs = 1.0 - inc_beta(b, a, 1.0 - x, x);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
    // I_x(1, 1) = x and I_x(a, 1) = x^a
    assert!((inc_beta(1.0, 1.0, 0.3, 0.7) - 0.3).abs() < 1e-14);
    assert!((inc_beta(2.5, 1.0, 0.4, 0.6) - 0.4f64.powf(2.5)).abs() < 1e-14);
}

#[test]
fn normal_tails() {
    assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
    for k in 0..60 {
        let z = k as f64 * 0.25;
        assert!((normal_cdf(z) + normal_cdf(-z) - 1.0).abs() < 1e-15);
        assert_eq!(normal_sf(z), normal_cdf(-z));
    }
    // far tail is resolved in relative terms
    let tail = normal_cdf(-10.0);
    assert!(close(tail, 7.619_853_024_160_47e-24, 1e-9));
    assert!(close(normal_quantile(1e-20), -9.262_340_089_798_408, 1e-9));
}

fn families() -> Vec<D> {
    vec![
        D::Normal,
        D::StudentT { df: 1.0 },
        D::StudentT { df: 2.5 },
        D::StudentT { df: 30.0 },
        D::ChiSquare { df: 1.0 },
        D::ChiSquare { df: 7.0 },
        D::F { df1: 1.0, df2: 4.0 },
        D::F { df1: 5.0, df2: 12.5 },
    ]
}

#[test]
fn quantile_round_trip_grid() {
    for spec in families() {
        for k in 1..500 {
            let q = k as f64 / 500.0;
            let x = spec.quantile(q).unwrap();
            let back = spec.cdf(x);
            assert!((back - q).abs() < 1e-10, "{spec:?} q={q} x={x} back={back}");
        }
    }
}

#[test]
fn cdfs_are_monotone() {
    for spec in families() {
        let mut prev = 0.0;
        for k in -400..=400 {
            let x = k as f64 * 0.05;
            let c = spec.cdf(x);
            assert!((0.0..=1.0).contains(&c));
            assert!(c >= prev, "{spec:?} at {x}");
            prev = c;
        }
    }
}

#[test]
fn invalid_arguments() {
    assert!(D::StudentT { df: 0.0 }.validate().is_err());
    assert!(D::F { df1: 1.0, df2: -2.0 }.validate().is_err());
    assert!(D::Normal.quantile(1.0).is_err());
    assert!(D::Normal.quantile(f64::NAN).is_err());
}
