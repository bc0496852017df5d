//! Convex minimization of discretized `L_p` objectives
//!
//! ```text
//! Φ(a) = Σ_i w_i |(B a − y)_i|^p,    optionally subject to  c·a = 1,
//! ```
//!
//! by damped Newton steps with Armijo backtracking. For `p < 2` the kernel
//! `|r|^p` is replaced by `(r² + ε²)^{p/2}` and `ε` is driven down by
//! continuation, warm-starting each stage from the previous one.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numcore::Exponent;

/// Solver controls.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Required relative Newton decrement `(−∇Φ·d) / Φ` at the end.
    pub stationarity_tol: f64,
    /// Required relative objective decrease of the last accepted step.
    pub decrease_tol: f64,
    /// Newton iterations allowed per continuation stage.
    pub max_iterations: usize,
    /// First and last smoothing level for `p < 2`, relative to the initial
    /// residual scale.
    pub smoothing: (f64, f64),
    /// Starting coefficients; rescaled onto `c·a = 1` when constrained.
    pub initial: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            stationarity_tol: 1e-8,
            decrease_tol: 1e-12,
            max_iterations: 200,
            smoothing: (1e-2, 1e-8),
            initial: None,
        }
    }
}

/// A discretized `L_p` objective on a coefficient space.
#[derive(Debug, Clone)]
pub struct LpObjective {
    basis: DMatrix<f64>,
    weights: DVector<f64>,
    target: DVector<f64>,
    p: f64,
    constraint: Option<DVector<f64>>,
}

/// Result of [`minimize_lp`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub coeffs: Vec<f64>,
    /// Unsmoothed `Σ w_i |r_i|^p`.
    pub objective: f64,
    /// `objective^{1/p}`.
    pub norm: f64,
    /// Final relative Newton decrement.
    pub stationarity: f64,
    pub iterations: usize,
    /// Relative Newton decrement at every iteration, all stages.
    pub history: Vec<f64>,
}

impl LpObjective {
    /// `basis` has one row per quadrature node and one column per
    /// coefficient; `weights` are the quadrature weights; `target` the
    /// sampled function being approximated (zeros for a homogeneous problem).
    pub fn new(basis: DMatrix<f64>, weights: DVector<f64>, target: DVector<f64>, p: Exponent) -> Result<Self> {
        if p.is_infinite() {
            return Err(Error::InvalidArgument("the convex solver handles p < inf only".into()));
        }
        if basis.nrows() != weights.len() || basis.nrows() != target.len() {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: {} rows, {} weights, {} targets",
                basis.nrows(),
                weights.len(),
                target.len()
            )));
        }
        if basis.ncols() == 0 {
            return Err(Error::InvalidArgument("empty coefficient space".into()));
        }
        Ok(LpObjective {
            basis,
            weights,
            target,
            p: p.value(),
            constraint: None,
        })
    }

    /// Restricts to the affine slice `c·a = 1`.
    pub fn with_constraint(mut self, c: Vec<f64>) -> Result<Self> {
        if c.len() != self.basis.ncols() {
            return Err(Error::InvalidArgument("constraint length mismatch".into()));
        }
        if c.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidArgument("constraint functional vanishes".into()));
        }
        self.constraint = Some(DVector::from_vec(c));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn residual(&self, a: &[f64]) -> DVector<f64> {
        &self.basis * DVector::from_column_slice(a) - &self.target
    }

    /// `Σ w_i |r_i|^p`.
    pub fn value(&self, a: &[f64]) -> f64 {
        let r = self.residual(a);
        r.iter()
            .zip(self.weights.iter())
            .map(|(r, w)| w * r.abs().powf(self.p))
            .sum()
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.value(a).powf(1.0 / self.p)
    }

    /// `c·a` for the constraint functional, if any.
    pub fn constraint_value(&self, a: &[f64]) -> Option<f64> {
        self.constraint.as_ref().map(|c| c.dot(&DVector::from_column_slice(a)))
    }

    fn smoothed_value(&self, r: &DVector<f64>, eps: f64) -> f64 {
        let p = self.p;
        r.iter()
            .zip(self.weights.iter())
            .map(|(&r, &w)| {
                if eps == 0.0 {
                    w * r.abs().powf(p)
                } else {
                    w * (r * r + eps * eps).powf(0.5 * p)
                }
            })
            .sum()
    }

    /// Gradient and Hessian of the smoothed objective at residual `r`.
    fn derivatives(&self, r: &DVector<f64>, eps: f64) -> (DVector<f64>, DMatrix<f64>) {
        let p = self.p;
        let n = r.len();
        let mut d1 = DVector::<f64>::zeros(n);
        let mut sqrt_d2 = DVector::<f64>::zeros(n);
        for i in 0..n {
            let ri = r[i];
            let w = self.weights[i];
            let (g, h) = if eps == 0.0 {
                let a = ri.abs();
                if p == 2.0 {
                    (2.0 * ri, 2.0)
                } else if a == 0.0 {
                    (0.0, 0.0)
                } else {
                    (p * a.powf(p - 2.0) * ri, p * (p - 1.0) * a.powf(p - 2.0))
                }
            } else {
                let s = ri * ri + eps * eps;
                (
                    p * ri * s.powf(0.5 * p - 1.0),
                    p * s.powf(0.5 * p - 2.0) * ((p - 1.0) * ri * ri + eps * eps),
                )
            };
            d1[i] = w * g;
            sqrt_d2[i] = (w * h).max(0.0).sqrt();
        }
        let grad = self.basis.tr_mul(&d1);
        let mut scaled = self.basis.clone();
        for mut col in scaled.column_iter_mut() {
            col.component_mul_assign(&sqrt_d2);
        }
        let hess = scaled.transpose() * &scaled;
        (grad, hess)
    }

    /// Newton direction, keeping `c·d = 0` when constrained.
    fn newton_direction(&self, grad: &DVector<f64>, hess: &DMatrix<f64>) -> Result<DVector<f64>> {
        let n = grad.len();
        let diag_scale = (0..n)
            .map(|i| hess[(i, i)].abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut mu = 1e-14 * diag_scale;
        for _ in 0..12 {
            let d = match &self.constraint {
                None => {
                    let mut h = hess.clone();
                    for i in 0..n {
                        h[(i, i)] += mu;
                    }
                    h.cholesky().map(|ch| ch.solve(&(-grad)))
                }
                Some(c) => {
                    let mut k = DMatrix::<f64>::zeros(n + 1, n + 1);
                    k.view_mut((0, 0), (n, n)).copy_from(hess);
                    for i in 0..n {
                        k[(i, i)] += mu;
                        k[(i, n)] = c[i];
                        k[(n, i)] = c[i];
                    }
                    let mut rhs = DVector::<f64>::zeros(n + 1);
                    rhs.rows_mut(0, n).copy_from(&(-grad));
                    k.lu().solve(&rhs).map(|s| s.rows(0, n).into_owned())
                }
            };
            if let Some(d) = d {
                if d.iter().all(|v| v.is_finite()) {
                    return Ok(d);
                }
            }
            mu = if mu == 0.0 { 1e-14 } else { mu * 100.0 };
        }
        Err(Error::Singular("Newton system".into()))
    }

    /// Residual indistinguishable from zero relative to the fitted values.
    fn at_rounding_level(&self, a: &[f64], r: &DVector<f64>) -> bool {
        let fitted = (&self.basis * DVector::from_column_slice(a)).amax();
        let scale = self.target.amax().max(fitted);
        scale > 0.0 && r.amax() <= 1e-13 * scale
    }

    fn feasible_start(&self, initial: Option<&[f64]>) -> Vec<f64> {
        let n = self.dim();
        match (&self.constraint, initial) {
            (None, Some(a)) => a.to_vec(),
            (None, None) => vec![0.0; n],
            (Some(c), init) => {
                let cc = c.dot(c);
                if let Some(a) = init {
                    let ca = c.dot(&DVector::from_column_slice(a));
                    if ca.abs() > 1e-12 * cc.sqrt() * a.iter().map(|v| v * v).sum::<f64>().sqrt() {
                        return a.iter().map(|v| v / ca).collect();
                    }
                    // shift onto the slice along c
                    return a.iter().zip(c.iter()).map(|(v, ci)| v + (1.0 - ca) * ci / cc).collect();
                }
                c.iter().map(|ci| ci / cc).collect()
            }
        }
    }
}

/// Minimizes the objective; see the module documentation.
pub fn minimize_lp(obj: &LpObjective, opts: &SolverOptions) -> Result<LpSolution> {
    let mut a = obj.feasible_start(opts.initial.as_deref());
    let mut history = Vec::new();
    let mut iterations = 0;

    if opts.initial.is_none() && obj.p != 2.0 {
        // warm start from the least-squares solution
        let mut ls = obj.clone();
        ls.p = 2.0;
        let (a2, _) = newton_stage(&ls, a.clone(), 0.0, opts, &mut Vec::new(), &mut 0, true)?;
        a = a2;
    }

    // exact fit up to rounding: nothing left to smooth
    if obj.at_rounding_level(&a, &obj.residual(&a)) {
        let objective = obj.value(&a);
        return Ok(LpSolution {
            norm: objective.powf(1.0 / obj.p),
            objective,
            coeffs: a,
            stationarity: 0.0,
            iterations,
            history,
        });
    }

    let stages: Vec<f64> = if obj.p < 2.0 {
        let r = obj.residual(&a);
        let scale = r.amax().max(f64::MIN_POSITIVE);
        let (hi, lo) = opts.smoothing;
        let mut eps = hi;
        let mut out = Vec::new();
        while eps > lo * (1.0 + 1e-9) {
            out.push(eps * scale);
            eps /= 10.0;
        }
        out.push(lo * scale);
        out
    } else {
        vec![0.0]
    };

    let mut stationarity = f64::INFINITY;
    for (k, &eps) in stages.iter().enumerate() {
        let last = k + 1 == stages.len();
        let (a_next, stat) = newton_stage(obj, a, eps, opts, &mut history, &mut iterations, last)?;
        a = a_next;
        stationarity = stat;
    }

    if let Some(c) = &obj.constraint {
        let ca = c.dot(&DVector::from_column_slice(&a));
        a.iter_mut().for_each(|v| *v /= ca);
    }
    let objective = obj.value(&a);
    Ok(LpSolution {
        norm: objective.powf(1.0 / obj.p),
        objective,
        coeffs: a,
        stationarity,
        iterations,
        history,
    })
}

/// Newton iterations at one smoothing level. Returns the iterate and its
/// final relative decrement; only the final stage must converge.
fn newton_stage(
    obj: &LpObjective,
    mut a: Vec<f64>,
    eps: f64,
    opts: &SolverOptions,
    history: &mut Vec<f64>,
    iterations: &mut usize,
    must_converge: bool,
) -> Result<(Vec<f64>, f64)> {
    let stat_tol = if must_converge {
        opts.stationarity_tol
    } else {
        opts.stationarity_tol.sqrt()
    };
    let mut last_decrease = f64::INFINITY;
    let mut stat = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        *iterations += 1;
        let r = obj.residual(&a);
        let phi = obj.smoothed_value(&r, eps);
        if phi <= f64::MIN_POSITIVE || obj.at_rounding_level(&a, &r) {
            history.push(0.0);
            return Ok((a, 0.0));
        }
        let (grad, hess) = obj.derivatives(&r, eps);
        let mut d = obj.newton_direction(&grad, &hess)?;
        let mut dec = -grad.dot(&d);
        if !(dec > 0.0) {
            // not a descent direction; fall back to projected steepest descent
            d = -&grad;
            if let Some(c) = &obj.constraint {
                let t = d.dot(c) / c.dot(c);
                d -= c * t;
            }
            dec = -grad.dot(&d);
            if !(dec > 0.0) {
                history.push(0.0);
                return Ok((a, 0.0));
            }
        }
        stat = dec / phi;
        history.push(stat);
        if stat < stat_tol && (last_decrease < opts.decrease_tol || stat < 1e-15) {
            return Ok((a, stat));
        }

        let av = DVector::from_column_slice(&a);
        let mut t = 1.0;
        let new_phi = loop {
            let trial = &av + &d * t;
            let v = obj.smoothed_value(&obj.residual(trial.as_slice()), eps);
            if v.is_finite() && v <= phi - 1e-4 * t * dec {
                a = trial.as_slice().to_vec();
                break Some(v);
            }
            t *= 0.5;
            if t < 1e-14 {
                break None;
            }
        };
        match new_phi {
            Some(v) => {
                if v > phi {
                    return Err(Error::NonDecreasingObjective { before: phi, after: v });
                }
                last_decrease = (phi - v) / phi;
            }
            None => {
                if stat < stat_tol || !must_converge {
                    return Ok((a, stat));
                }
                return Err(Error::LineSearchFailure { step: t });
            }
        }
    }
    if must_converge && stat >= stat_tol {
        return Err(Error::OptimizerNonConvergence {
            history: history.iter().rev().take(10).rev().copied().collect(),
        });
    }
    Ok((a, stat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design() -> (DMatrix<f64>, DVector<f64>) {
        // x_i on [-1, 1], columns 1, x
        let m = 41;
        let xs: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * i as f64 / (m - 1) as f64).collect();
        let b = DMatrix::from_fn(m, 2, |i, j| if j == 0 { 1.0 } else { xs[i] });
        let w = DVector::from_element(m, 2.0 / m as f64);
        (b, w)
    }

    #[test]
    fn least_squares_line() {
        let (b, w) = design();
        let y = DVector::from_fn(b.nrows(), |i, _| 3.0 + 2.0 * b[(i, 1)]);
        let obj = LpObjective::new(b, w, y, Exponent::new(2.0).unwrap()).unwrap();
        let s = minimize_lp(&obj, &SolverOptions::default()).unwrap();
        assert!((s.coeffs[0] - 3.0).abs() < 1e-12 && (s.coeffs[1] - 2.0).abs() < 1e-12);
        assert!(s.objective < 1e-20);
    }

    #[test]
    fn l1_median() {
        // constant fit in L1 of a skewed sample is its weighted median
        let m = 5;
        let b = DMatrix::from_element(m, 1, 1.0);
        let w = DVector::from_element(m, 1.0);
        let y = DVector::from_vec(vec![0.0, 1.0, 2.0, 10.0, 50.0]);
        let obj = LpObjective::new(b, w, y, Exponent::new(1.0).unwrap()).unwrap();
        let s = minimize_lp(&obj, &SolverOptions::default()).unwrap();
        assert!((s.coeffs[0] - 2.0).abs() < 1e-6, "{:?}", s.coeffs);
    }

    #[test]
    fn constrained_minimum_norm() {
        // min Σ a_i² subject to a_0 + 2 a_1 = 1  →  a = (1, 2)/5
        let b = DMatrix::identity(2, 2);
        let w = DVector::from_element(2, 1.0);
        let y = DVector::zeros(2);
        let obj = LpObjective::new(b, w, y, Exponent::new(2.0).unwrap())
            .unwrap()
            .with_constraint(vec![1.0, 2.0])
            .unwrap();
        let s = minimize_lp(&obj, &SolverOptions::default()).unwrap();
        assert!((s.coeffs[0] - 0.2).abs() < 1e-14 && (s.coeffs[1] - 0.4).abs() < 1e-14);
    }

    #[test]
    fn quartic_objective_converges() {
        let (b, w) = design();
        let y = DVector::from_fn(b.nrows(), |i, _| b[(i, 1)].abs());
        let obj = LpObjective::new(b, w, y, Exponent::new(4.0).unwrap()).unwrap();
        let s = minimize_lp(&obj, &SolverOptions::default()).unwrap();
        assert!(s.stationarity < 1e-8);
        assert!(s.coeffs[1].abs() < 1e-8);
    }
}
