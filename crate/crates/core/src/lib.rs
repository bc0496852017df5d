//! Sharp constants of univariate approximation theory.
//!
//! The crate computes best-approximation errors (Remez exchange, `L_p`
//! minimization), sharp Nikolskii–Bernstein constants for trigonometric
//! polynomials and band-limited functions, and drives the asymptotic
//! experiments that compare polynomial constants with their entire-function
//! counterparts.

pub mod bandlimited;
pub mod classes;
pub mod error;
pub mod extremal;
pub mod limits;
pub mod numcore;
pub mod polyspaces;

pub use error::{Error, Result};
