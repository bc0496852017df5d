use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpconst::extremal::{
    best_lp_approx, nikolskii_trig, nikolskii_trig_with, remez_interval, remez_periodic, ApproxSpace, Approximant,
    Family, LpObjective, RemezOptions, SharpConstantProblem, SolverOptions,
};
use sharpconst::numcore::{gauss_legendre, Exponent, Func, Interval, Kinks};
use sharpconst::polyspaces::ChebPoly;

fn abs_power(l: f64) -> Func {
    Func::new(move |x: f64| x.abs().powf(l)).with_kinks(Kinks::Points(vec![0.0]))
}

#[test]
fn l2_constant_matches_dirichlet_kernel() {
    for n in [1usize, 2, 5, 8, 16, 32] {
        let c = nikolskii_trig(&SharpConstantProblem::new(Family::Trig(n), 2.0, 0).unwrap()).unwrap();
        // D_n(x) = 1 + 2 Σ cos kx reproduces point values; its squared norm
        // by an exact trapezoid sum
        let m = 4 * n + 8;
        let sq: f64 = (0..m)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / m as f64;
                let d = 1.0 + 2.0 * (1..=n).map(|k| (k as f64 * x).cos()).sum::<f64>();
                d * d
            })
            .sum::<f64>()
            * 2.0
            * PI
            / m as f64;
        let oracle = (2 * n + 1) as f64 / sq.sqrt();
        assert!((c.value - oracle).abs() < 1e-8, "n={n}: {} vs {oracle}", c.value);
        assert!((c.value - ((2 * n + 1) as f64 / (2.0 * PI)).sqrt()).abs() < 1e-8);
    }
}

#[test]
fn sup_constant_is_bernstein() {
    for n in [1usize, 3, 10, 32] {
        let c = nikolskii_trig(&SharpConstantProblem::new(Family::Trig(n), f64::INFINITY, 1).unwrap()).unwrap();
        assert_eq!(c.value, n as f64);
        assert!(c.certificate_gap < 1e-8);
    }
}

#[test]
fn restarts_from_scaled_points_agree() {
    let problem = SharpConstantProblem::new(Family::Trig(6), 1.5, 1).unwrap();
    let base = nikolskii_trig(&problem).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for alpha in [0.1, 3.0, 40.0] {
        // the sin basis of degree 6 has 6 coefficients
        let init: Vec<f64> = (0..6).map(|_| alpha * rng.gen_range(0.5..1.5)).collect();
        let opts = SolverOptions {
            initial: Some(init),
            ..SolverOptions::default()
        };
        let c = nikolskii_trig_with(&problem, &opts).unwrap();
        assert!(
            (c.value - base.value).abs() < 1e-8 * base.value,
            "alpha={alpha}: {} vs {}",
            c.value,
            base.value
        );
    }
}

#[test]
fn l2_approximation_matches_legendre_projection() {
    let f = |x: f64| x.abs();
    let n = 6;
    let r = best_lp_approx(
        &abs_power(1.0),
        n,
        ApproxSpace::Interval(Interval::unit()),
        Exponent::new(2.0).unwrap(),
    )
    .unwrap();
    // ‖f‖² − Σ (2k+1)/2 ⟨f, P_k⟩², with the kink split off
    let rule = gauss_legendre(40).unwrap();
    let halves = [
        rule.mapped(Interval::new(-1.0, 0.0).unwrap()),
        rule.mapped(Interval::new(0.0, 1.0).unwrap()),
    ];
    let integrate = |g: &dyn Fn(f64) -> f64| halves.iter().map(|h| h.integrate(g)).sum::<f64>();
    let legendre = |k: usize, x: f64| {
        let (mut p0, mut p1) = (1.0, x);
        if k == 0 {
            return 1.0;
        }
        for j in 1..k {
            let p2 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p0) / (j + 1) as f64;
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    let mut err2 = integrate(&|x| f(x) * f(x));
    for k in 0..=n {
        let ip = integrate(&|x| f(x) * legendre(k, x));
        err2 -= (2 * k + 1) as f64 / 2.0 * ip * ip;
    }
    assert!((r.error - err2.sqrt()).abs() < 1e-9, "{} vs {}", r.error, err2.sqrt());
}

#[test]
fn remez_is_locally_optimal() {
    let f = abs_power(1.0);
    let r = remez_interval(&f, 6, &Interval::unit(), &RemezOptions::default()).unwrap();
    let Approximant::Algebraic(p) = &r.approximant else {
        panic!("algebraic expected")
    };
    let mut xs: Vec<f64> = (0..=20_000).map(|i| -1.0 + i as f64 / 10_000.0).collect();
    xs.extend_from_slice(&r.reference);
    let sup = |q: &ChebPoly| {
        xs.iter()
            .map(|&x| (f.eval(x) - q.eval_unchecked(x)).abs())
            .fold(0.0, f64::max)
    };
    let base = sup(p);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let dir: Vec<f64> = (0..p.coeffs().len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        let coeffs: Vec<f64> = p.coeffs().iter().zip(&dir).map(|(c, d)| c + 1e-6 * d / norm).collect();
        let q = ChebPoly::new(Interval::unit(), coeffs).unwrap();
        assert!(sup(&q) >= base - 1e-12);
    }
}

#[test]
fn alternation_counts() {
    let f = abs_power(1.0);
    for n in [3usize, 8] {
        let r = remez_interval(&f, n, &Interval::unit(), &RemezOptions::default()).unwrap();
        assert_eq!(r.reference.len(), n + 2);
        assert!(r.reference_errors.windows(2).all(|w| w[0] * w[1] < 0.0));
    }
    let g = Func::new(|x: f64| x.sin().abs()).with_kinks(Kinks::Lattice {
        offset: 0.0,
        spacing: PI,
    });
    for n in [2usize, 5] {
        let r = remez_periodic(&g, n, &RemezOptions::default()).unwrap();
        assert_eq!(r.reference.len(), 2 * n + 2);
        assert!(r.reference_errors.windows(2).all(|w| w[0] * w[1] < 0.0));
    }
}

#[test]
fn error_is_monotone_in_degree() {
    for l in [0.5, 1.0, 1.5] {
        let f = abs_power(l);
        let mut prev = f64::INFINITY;
        for n in (2..=40).step_by(2) {
            let e = remez_interval(&f, n, &Interval::unit(), &RemezOptions::default())
                .unwrap()
                .error();
            assert!(e <= prev * (1.0 + 1e-10), "lambda={l} n={n}");
            prev = e;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn objective_is_midpoint_convex(
        p in 1.0f64..6.0,
        a in proptest::collection::vec(-2.0f64..2.0, 3),
        b in proptest::collection::vec(-2.0f64..2.0, 3),
    ) {
        let m = 40;
        let xs: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * i as f64 / (m - 1) as f64).collect();
        let basis = DMatrix::from_fn(m, 3, |i, k| xs[i].powi(k as i32));
        let target = DVector::from_iterator(m, xs.iter().map(|x| x.abs()));
        let obj = LpObjective::new(basis, DVector::from_element(m, 2.0 / m as f64), target, Exponent::new(p).unwrap()).unwrap();
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        let lhs = obj.value(&mid);
        let rhs = 0.5 * (obj.value(&a) + obj.value(&b));
        prop_assert!(lhs <= rhs + 1e-10 * rhs.max(1.0));
    }
}
