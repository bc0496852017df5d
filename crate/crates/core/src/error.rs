use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("exponent p = {0} < 1: quasi-norm out of scope")]
    QuasiNorm(f64),

    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutsideDomain { x: f64, a: f64, b: f64 },

    #[error("quadrature did not converge after {refinements} refinements (last two values {prev}, {last})")]
    NonConvergence { refinements: usize, prev: f64, last: f64 },

    #[error("remez exchange hit the iteration limit ({iterations}) with defect {defect:e}")]
    MaxIterations { iterations: usize, defect: f64 },

    #[error("degenerate remez reference: {0}")]
    DegenerateReference(String),

    #[error("linear system is singular: {0}")]
    Singular(String),

    #[error("line search failed to decrease the objective (step {step:e})")]
    LineSearchFailure { step: f64 },

    #[error("objective did not decrease: {before} -> {after}")]
    NonDecreasingObjective { before: f64, after: f64 },

    #[error("optimizer did not converge; stationarity residual history {history:?}")]
    OptimizerNonConvergence { history: Vec<f64> },

    #[error("integration window half-width {x_max} too small for truncation J = {j} (need at least {needed})")]
    WindowTooSmall { x_max: f64, j: usize, needed: f64 },

    #[error("derivative order {0} not supported (maximum is 3)")]
    DerivativeOrder(usize),

    #[error("series too short: need at least {needed} entries, got {got}")]
    InsufficientEntries { needed: usize, got: usize },

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
