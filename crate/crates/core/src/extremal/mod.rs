//! Extremal solvers: Remez exchange for best uniform approximation, convex
//! `L_p` minimization, and sharp Nikolskii–Bernstein constants on the
//! trigonometric and band-limited sides.

mod convex;
mod lp_approx;
mod nikolskii;
mod remez;

pub use convex::{minimize_lp, LpObjective, LpSolution, SolverOptions};
pub use lp_approx::{best_lp_approx, ApproxSpace, LpApproximation};
pub use nikolskii::{
    nikolskii_bandlimited, nikolskii_trig, nikolskii_trig_with, BandLimitedOptions, ConstantEstimate, Extremizer,
    Family, SharpConstantProblem,
};
pub use remez::{remez_interval, remez_periodic, RemezOptions};

use crate::numcore::Func;
use crate::polyspaces::{ChebPoly, TrigPoly};

/// An approximating element: algebraic or trigonometric polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum Approximant {
    Algebraic(ChebPoly),
    Trigonometric(TrigPoly),
}

impl Approximant {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Approximant::Algebraic(p) => p.eval_unchecked(x),
            Approximant::Trigonometric(q) => q.eval(x),
        }
    }

    pub fn to_func(&self) -> Func {
        match self {
            Approximant::Algebraic(p) => p.to_func(),
            Approximant::Trigonometric(q) => q.to_func(),
        }
    }

    /// Real coefficients: Chebyshev coefficients, or `a_0..a_n, b_1..b_n`.
    pub fn real_coeffs(&self) -> Vec<f64> {
        match self {
            Approximant::Algebraic(p) => p.coeffs().to_vec(),
            Approximant::Trigonometric(q) => {
                let (mut a, b) = q.cos_sin();
                a.extend(b);
                a
            }
        }
    }
}

/// A best uniform approximant with its equioscillation certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct RemezResult {
    pub approximant: Approximant,
    /// The levelled error `h` of the last reference solve (signed).
    pub leveled_error: f64,
    /// Largest error magnitude found by the final scan.
    pub max_error: f64,
    /// Alternation nodes, strictly increasing.
    pub reference: Vec<f64>,
    /// Signed error at each alternation node.
    pub reference_errors: Vec<f64>,
    pub iterations: usize,
    /// `(max|e| − |h|) / max|e|`.
    pub equioscillation_defect: f64,
    /// Set when the error is at the rounding level of the evaluation, so the
    /// defect cannot be driven lower (this includes targets inside the
    /// approximating space).
    pub noise_limited: bool,
    pub tol: f64,
}

impl RemezResult {
    /// The best-approximation error `E_n(f)`.
    pub fn error(&self) -> f64 {
        self.leveled_error.abs()
    }
}
