use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::convex::{minimize_lp, LpObjective, SolverOptions};
use crate::bandlimited::{
    default_window, sinc_derivative, BandLimited, TruncationDiagnostic, DEFAULT_J, MAX_DERIVATIVE,
};
use crate::error::{Error, Result};
use crate::numcore::{composite_gauss_legendre, Exponent, Interval};
use crate::polyspaces::TrigPoly;

/// The function space of a sharp-constant problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Real trigonometric polynomials of degree `≤ n` on the `2π`-circle.
    Trig(usize),
    /// Cardinal series of type `sigma` truncated to `|j| ≤ j`.
    BandLimited { sigma: f64, j: usize },
}

impl Family {
    pub fn bandlimited(sigma: f64) -> Self {
        Family::BandLimited { sigma, j: DEFAULT_J }
    }
}

/// `sup ‖f^{(s)}‖_q / ‖f‖_p` over a family, with `q = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpConstantProblem {
    pub family: Family,
    pub p: Exponent,
    pub q: Exponent,
    pub s: usize,
}

impl SharpConstantProblem {
    pub fn new(family: Family, p: f64, s: usize) -> Result<Self> {
        let p = Exponent::new(p)?;
        match family {
            Family::Trig(n) if n == 0 => {
                return Err(Error::InvalidArgument("trigonometric degree must be at least 1".into()))
            }
            Family::BandLimited { sigma, j } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
                }
                if j < 8 {
                    return Err(Error::InvalidArgument(format!("need J >= 8, got {j}")));
                }
                if s > MAX_DERIVATIVE {
                    return Err(Error::DerivativeOrder(s));
                }
            }
            _ => {}
        }
        Ok(SharpConstantProblem {
            family,
            p,
            q: Exponent::INFINITY,
            s,
        })
    }
}

/// The function attaining (approximately) a sharp constant.
#[derive(Debug, Clone, PartialEq)]
pub enum Extremizer {
    Trig(TrigPoly),
    BandLimited(BandLimited),
}

/// A computed sharp constant.
///
/// Extremizers are not unique (translations and sign flips); the parity
/// restriction and the normalization `f^{(s)}(0) = 1` pick one.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantEstimate {
    pub value: f64,
    pub extremizer: Extremizer,
    /// Relative stationarity residual of the optimizer, or the ratio defect of
    /// the analytic extremizer for `p = ∞`.
    pub certificate_gap: f64,
    /// Window diagnostic of the extremizer (band-limited family only).
    pub diagnostic: Option<TruncationDiagnostic>,
    pub iterations: usize,
}

/// Discretization controls for [`nikolskii_bandlimited`].
#[derive(Debug, Clone, PartialEq)]
pub struct BandLimitedOptions {
    /// Integration window `[−X, X]`; defaults to `(J + 64) π / σ`.
    pub x_max: Option<f64>,
    /// Gauss–Legendre points per cardinal spacing `π/σ`.
    pub points_per_node: usize,
    /// Relative tolerance of the final adaptive norm evaluation.
    pub norm_tol: f64,
    pub solver: SolverOptions,
}

impl Default for BandLimitedOptions {
    fn default() -> Self {
        BandLimitedOptions {
            x_max: None,
            points_per_node: 16,
            norm_tol: 1e-8,
            solver: SolverOptions::default(),
        }
    }
}

/// `s`-th derivative at 0 of `cos(kx)` (even `s`) or `sin(kx)` (odd `s`).
fn parity_functional(k: usize, s: usize) -> f64 {
    let sign = if (s / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * (k as f64).powi(s as i32)
}

/// Sharp constant over trigonometric polynomials of degree `≤ n`.
pub fn nikolskii_trig(problem: &SharpConstantProblem) -> Result<ConstantEstimate> {
    nikolskii_trig_with(problem, &SolverOptions::default())
}

pub fn nikolskii_trig_with(problem: &SharpConstantProblem, opts: &SolverOptions) -> Result<ConstantEstimate> {
    let n = match problem.family {
        Family::Trig(n) => n,
        Family::BandLimited { .. } => return Err(Error::InvalidArgument("nikolskii_trig needs a Trig family".into())),
    };
    let s = problem.s;
    if problem.p.is_infinite() {
        return trig_sup_case(n, s);
    }

    // even s: Q = Σ_{k=0}^n a_k cos kx; odd s: Q = Σ_{k=1}^n b_k sin kx
    let even = s % 2 == 0;
    let ks: Vec<usize> = if even { (0..=n).collect() } else { (1..=n).collect() };
    let constraint: Vec<f64> = ks.iter().map(|&k| parity_functional(k, s)).collect();
    if constraint.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidArgument(
            "derivative functional vanishes on the family".into(),
        ));
    }

    // |Q|^p is even, so integrate over [0, π] with doubled trapezoid weights
    let m = (32 * (n + 1)).max(1024).next_multiple_of(2);
    let h = 2.0 * PI / m as f64;
    let half = m / 2;
    let xs: Vec<f64> = (0..=half).map(|i| i as f64 * h).collect();
    let weights = DVector::from_fn(half + 1, |i, _| if i == 0 || i == half { h } else { 2.0 * h });
    let basis = DMatrix::from_fn(half + 1, ks.len(), |i, c| {
        let kx = ks[c] as f64 * xs[i];
        if even {
            kx.cos()
        } else {
            kx.sin()
        }
    });
    let obj = LpObjective::new(basis, weights, DVector::zeros(half + 1), problem.p)?.with_constraint(constraint)?;
    let sol = minimize_lp(&obj, opts)?;

    let mut cos = vec![0.0; n + 1];
    let mut sin = vec![0.0; n];
    for (c, &k) in ks.iter().enumerate() {
        if even {
            cos[k] = sol.coeffs[c];
        } else {
            sin[k - 1] = sol.coeffs[c];
        }
    }
    let q = TrigPoly::from_cos_sin(&cos, &sin);
    let norm = q.lp_norm(problem.p)?.value;
    let at_zero = q.derivative(s as u32).eval(0.0).abs();
    Ok(ConstantEstimate {
        value: at_zero / norm,
        extremizer: Extremizer::Trig(q),
        certificate_gap: sol.stationarity.max(0.0),
        diagnostic: None,
        iterations: sol.iterations,
    })
}

/// `p = ∞`: the sharp Bernstein inequality, attained by `cos nx`.
fn trig_sup_case(n: usize, s: usize) -> Result<ConstantEstimate> {
    let mut cos = vec![0.0; n + 1];
    cos[n] = 1.0;
    let q = TrigPoly::from_cos_sin(&cos, &vec![0.0; n]);
    let value = (n as f64).powi(s as i32);
    let num = q.derivative(s as u32).lp_norm(Exponent::INFINITY)?.value;
    let den = q.lp_norm(Exponent::INFINITY)?.value;
    Ok(ConstantEstimate {
        value,
        extremizer: Extremizer::Trig(q),
        certificate_gap: ((num / den - value) / value).abs(),
        diagnostic: None,
        iterations: 0,
    })
}

/// Sharp constant over the truncated band-limited family, with the norm taken
/// over the window `[−X, X]`.
pub fn nikolskii_bandlimited(problem: &SharpConstantProblem, opts: &BandLimitedOptions) -> Result<ConstantEstimate> {
    let (sigma, jmax) = match problem.family {
        Family::BandLimited { sigma, j } => (sigma, j),
        Family::Trig(_) => {
            return Err(Error::InvalidArgument(
                "nikolskii_bandlimited needs a BandLimited family".into(),
            ))
        }
    };
    if problem.p.is_infinite() {
        return Err(Error::InvalidArgument("band-limited constants need p < inf".into()));
    }
    let s = problem.s;
    if s > MAX_DERIVATIVE {
        return Err(Error::DerivativeOrder(s));
    }
    let spacing = PI / sigma;
    let needed = (jmax as f64 + 1.0) * spacing;
    let x_max = opts.x_max.unwrap_or_else(|| default_window(jmax, sigma));
    if !(x_max >= needed * (1.0 - 1e-12)) {
        return Err(Error::WindowTooSmall { x_max, j: jmax, needed });
    }

    // even s: c_j = c_{−j}; odd s: c_j = −c_{−j}, c_0 = 0
    let even = s % 2 == 0;
    let js: Vec<i64> = if even {
        (0..=jmax as i64).collect()
    } else {
        (1..=jmax as i64).collect()
    };
    let column = |d: usize, x: f64, j: i64| -> f64 {
        let a = sinc_derivative(d, sigma * x - j as f64 * PI);
        if j == 0 {
            a
        } else {
            let b = sinc_derivative(d, sigma * x + j as f64 * PI);
            if even {
                a + b
            } else {
                a - b
            }
        }
    };
    let constraint: Vec<f64> = js.iter().map(|&j| sigma.powi(s as i32) * column(s, 0.0, j)).collect();

    let domain = Interval::new(0.0, x_max)?;
    let k1 = (x_max / spacing).floor() as i64;
    let breaks: Vec<f64> = (1..=k1).map(|k| k as f64 * spacing).collect();
    let rule = composite_gauss_legendre(&domain, &breaks, 1, opts.points_per_node)?;
    let m = rule.len();
    let nodes = rule.nodes();
    let basis = DMatrix::from_fn(m, js.len(), |i, c| column(0, nodes[i], js[c]));
    let weights = DVector::from_iterator(m, rule.weights().iter().map(|w| 2.0 * w));
    let obj = LpObjective::new(basis, weights, DVector::zeros(m), problem.p)?.with_constraint(constraint)?;
    let sol = minimize_lp(&obj, &opts.solver)?;

    let mut coeffs = vec![0.0; 2 * jmax + 1];
    for (c, &j) in js.iter().enumerate() {
        let v = sol.coeffs[c];
        coeffs[(jmax as i64 + j) as usize] = v;
        coeffs[(jmax as i64 - j) as usize] = if even { v } else { -v };
    }
    if !even {
        coeffs[jmax] = 0.0;
    }
    let g = BandLimited::new(sigma, coeffs)?;
    let (norm, diag) = g.lp_norm_with_tol(problem.p, x_max, opts.norm_tol)?;
    let at_zero = g.derivative_at(s, 0.0)?.abs();
    Ok(ConstantEstimate {
        value: at_zero / norm,
        extremizer: Extremizer::BandLimited(g),
        certificate_gap: sol.stationarity.max(0.0),
        diagnostic: Some(diag),
        iterations: sol.iterations,
    })
}
