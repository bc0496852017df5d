#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// Bracket `(lower, upper)` of the discrete minimax error of `f` on `xs`
/// over the span of `basis`, by Lawson's reweighted least-squares iteration.
///
/// Any probability weights give the lower bound `(Σ w r²)^{1/2}` at their
/// weighted least-squares fit; every fit gives the upper bound `max |r|`.
pub fn lawson_minimax(
    xs: &[f64],
    f: impl Fn(f64) -> f64,
    basis: &[Box<dyn Fn(f64) -> f64>],
    iters: usize,
) -> (f64, f64) {
    let m = xs.len();
    let a = DMatrix::from_fn(m, basis.len(), |i, k| basis[k](xs[i]));
    let b = DVector::from_iterator(m, xs.iter().map(|&x| f(x)));
    let mut w = DVector::from_element(m, 1.0 / m as f64);
    let mut upper = f64::INFINITY;
    let mut lower: f64 = 0.0;
    for _ in 0..iters {
        let sw = w.map(f64::sqrt);
        let mut aw = a.clone();
        for (i, mut row) in aw.row_iter_mut().enumerate() {
            row *= sw[i];
        }
        let bw = b.component_mul(&sw);
        let c = aw.svd(true, true).solve(&bw, 1e-15).expect("svd solve");
        let r = (&b - &a * c).map(f64::abs);
        upper = upper.min(r.max());
        lower = lower.max(w.dot(&r.component_mul(&r)).sqrt());
        w = w.component_mul(&r);
        let s = w.sum();
        w /= s;
    }
    (lower, upper)
}

pub fn trig_basis(n: usize) -> Vec<Box<dyn Fn(f64) -> f64>> {
    let mut out: Vec<Box<dyn Fn(f64) -> f64>> = vec![Box::new(|_| 1.0)];
    for k in 1..=n {
        let k = k as f64;
        out.push(Box::new(move |x| (k * x).cos()));
        out.push(Box::new(move |x| (k * x).sin()));
    }
    out
}

pub fn monomial_basis(n: usize) -> Vec<Box<dyn Fn(f64) -> f64>> {
    (0..=n)
        .map(|k| Box::new(move |x: f64| x.powi(k as i32)) as Box<dyn Fn(f64) -> f64>)
        .collect()
}

pub fn uniform(a: f64, b: f64, m: usize, closed: bool) -> Vec<f64> {
    let div = if closed { m - 1 } else { m };
    (0..m).map(|i| a + (b - a) * i as f64 / div as f64).collect()
}

/// Reference triangular wave of the given period and unit slope, zero at 0.
pub fn triangle(x: f64, period: f64) -> f64 {
    let u = (x / period + 0.25).rem_euclid(1.0) - 0.25;
    period * (0.25 - (u - 0.25).abs())
}
