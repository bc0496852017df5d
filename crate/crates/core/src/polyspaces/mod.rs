//! Algebraic polynomials in the Chebyshev basis and real or complex
//! trigonometric polynomials.

mod cheb;
mod trig;

pub use cheb::ChebPoly;
pub use trig::TrigPoly;
