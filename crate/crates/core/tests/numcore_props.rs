use std::f64::consts::PI;

use proptest::prelude::*;
use sharpconst::numcore::{lp_norm_interval, lp_norm_periodic, lp_norm_periodic_fn, Exponent, Func, Interval};
use sharpconst::polyspaces::TrigPoly;

fn trig(cos: Vec<f64>, sin: Vec<f64>) -> TrigPoly {
    TrigPoly::from_cos_sin(&cos, &sin)
}

fn coeffs(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (
        proptest::collection::vec(-1.0f64..1.0, n + 1),
        proptest::collection::vec(-1.0f64..1.0, n),
    )
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(3.0), 1.0f64..6.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn homogeneity((c, s) in coeffs(5), alpha in -5.0f64..5.0, p in exponent()) {
        let q = trig(c, s);
        let p = Exponent::new(p).unwrap();
        let a = q.lp_norm(p).unwrap().value;
        let b = q.scaled(alpha).lp_norm(p).unwrap().value;
        prop_assert!((b - alpha.abs() * a).abs() <= 1e-9 * a.max(1e-300) * alpha.abs().max(1.0));
    }

    #[test]
    fn triangle_inequality((c1, s1) in coeffs(4), (c2, s2) in coeffs(4), p in exponent()) {
        let q1 = trig(c1, s1);
        let q2 = trig(c2, s2);
        let p = Exponent::new(p).unwrap();
        let sum = q1.axpy(1.0, &q2).lp_norm(p).unwrap().value;
        let bound = q1.lp_norm(p).unwrap().value + q2.lp_norm(p).unwrap().value;
        prop_assert!(sum <= bound + 1e-10);
    }

    #[test]
    fn restriction_does_not_increase(a in -0.9f64..0.0, b in 0.1f64..0.9, p in exponent(), k in 0.5f64..4.0) {
        let f = Func::new(move |x: f64| (k * x).exp());
        let p = Exponent::new(p).unwrap();
        let whole = lp_norm_interval(&f, &Interval::unit(), p, 1e-10).unwrap().value;
        let part = lp_norm_interval(&f, &Interval::new(a, b).unwrap(), p, 1e-10).unwrap().value;
        prop_assert!(part <= whole * (1.0 + 1e-9));
    }

    #[test]
    fn grid_doubling_is_exact_for_even_p((c, s) in coeffs(6), half_p in 1usize..4) {
        let q = trig(c, s);
        let p = 2.0 * half_p as f64;
        let n = q.degree();
        let m = 8 * (n * 2 * half_p + 1);
        let sample = |m: usize| -> Vec<f64> { (0..m).map(|i| q.eval(2.0 * PI * i as f64 / m as f64)).collect() };
        let a = lp_norm_periodic(&sample(m), 2.0 * PI, p).unwrap();
        let b = lp_norm_periodic(&sample(2 * m), 2.0 * PI, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn periodic_fn_matches_closed_form() {
    let f = Func::new(f64::sin);
    let two = lp_norm_periodic_fn(&f, 2.0 * PI, Exponent::new(2.0).unwrap(), 64, 1e-12).unwrap();
    assert!((two.value - PI.sqrt()).abs() < 1e-12);
    let one = lp_norm_periodic_fn(&f, 2.0 * PI, Exponent::new(1.0).unwrap(), 64, 1e-10).unwrap();
    assert!((one.value - 4.0).abs() < 1e-8);
}
