use std::f64::consts::PI;

use proptest::prelude::*;
use sharpconst::extremal::RemezOptions;
use sharpconst::limits::{
    abs_power, bernstein_mu, entire_error_growing_interval, periodic_limit_individual, richardson, AsymptoticSeries,
    DEFAULT_N_LIST,
};
use sharpconst::numcore::{Func, Kinks};

fn opts() -> RemezOptions {
    RemezOptions::default()
}

fn series(f: impl Fn(f64) -> f64, ns: &[usize]) -> AsymptoticSeries {
    AsymptoticSeries::from_raw(0.0, ns.iter().map(|&n| (n, f(n as f64)))).unwrap()
}

const NS: [usize; 7] = [8, 12, 16, 24, 32, 48, 64];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constant_series_extrapolate_to_themselves(c in -10.0f64..10.0, order in 1usize..=3) {
        let r = richardson(&series(|_| c, &NS), order).unwrap();
        prop_assert!((r.limit - c).abs() <= 1e-12 * c.abs().max(1.0));
        prop_assert!(r.error_estimate <= 1e-12 * c.abs().max(1.0));
    }

    #[test]
    fn exact_models_are_recovered(c in -3.0f64..3.0, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let r = richardson(&series(|n| c + a / n + b / (n * n), &NS), 3).unwrap();
        prop_assert!((r.limit - c).abs() < 1e-8);
    }

    #[test]
    fn error_estimate_covers_order_spread(vals in proptest::collection::vec(-1.0f64..1.0, 7)) {
        let s = AsymptoticSeries::from_raw(0.0, NS.iter().zip(&vals).map(|(&n, &v)| (n, v))).unwrap();
        let r = richardson(&s, 2).unwrap();
        let spread = (r.limits_by_order[0] - r.limits_by_order[1]).abs();
        prop_assert!(r.error_estimate >= 0.5 * spread);
        prop_assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn scaled_values_follow_gamma(gamma in -2.0f64..2.0, raws in proptest::collection::vec(0.0f64..5.0, 5)) {
        let s = AsymptoticSeries::from_raw(gamma, (1..=5).map(|k| 3 * k).zip(raws)).unwrap();
        for e in s.entries() {
            prop_assert!((e.scaled - (e.n as f64).powf(gamma) * e.raw).abs() <= 1e-14 * e.scaled.abs().max(1e-300));
        }
    }
}

#[test]
fn bernstein_routes_agree() {
    let ns = [8usize, 12, 16, 24, 32];
    let a = bernstein_mu(1.0, &ns, &opts()).unwrap();
    let b1 = entire_error_growing_interval(&abs_power(1.0), 1.0, &ns, &opts()).unwrap();
    let b2 = entire_error_growing_interval(&abs_power(1.0), 2.0, &ns, &opts()).unwrap();
    for ((ra, r1), r2) in a.rows.iter().zip(&b1.rows).zip(&b2.rows) {
        let (ra, r1, r2) = (ra.scaled.unwrap(), r1.raw.unwrap(), r2.raw.unwrap());
        assert!((ra - r1).abs() < 1e-9 * ra);
        assert!((r2 - 0.5 * r1).abs() < 1e-9 * ra);
    }
    assert_eq!(a.diagnostic("monotonicity_violation"), Some(0.0));
    let la = a.extrapolation.unwrap().limit;
    assert!((la - 0.2802).abs() < 5e-4, "{la}");
}

#[test]
fn square_root_constant_is_finite() {
    let r = bernstein_mu(0.5, &DEFAULT_N_LIST, &opts()).unwrap();
    let e = r.extrapolation.unwrap();
    assert!(e.limit > 0.3 && e.limit < 0.4);
    assert!(e.error_estimate < 0.05 * e.limit);
}

#[test]
fn periodic_routes_agree() {
    let ns = [8usize, 12, 16, 24, 32];
    let saw = Func::new(|x: f64| {
        let u = (x / (2.0 * PI) + 0.25).rem_euclid(1.0) - 0.25;
        2.0 * PI * (0.25 - (u - 0.25).abs())
    })
    .with_kinks(Kinks::Lattice {
        offset: PI / 2.0,
        spacing: PI,
    });
    let abs_sin = Func::new(|x: f64| x.sin().abs()).with_kinks(Kinks::Lattice {
        offset: 0.0,
        spacing: PI,
    });
    let cos2 = Func::new(|x: f64| (2.0 * x).cos());
    for (name, f, sigma) in [("sawtooth", saw, 1.5), ("|sin|", abs_sin, 1.5), ("cos 2x", cos2, 2.5)] {
        let r = periodic_limit_individual(&f, sigma, &ns, &opts()).unwrap();
        let c = r.comparison.expect("both routes");
        assert!(c.gap < 1e-2, "{name}: {} vs {}", c.left, c.right);
    }
}
