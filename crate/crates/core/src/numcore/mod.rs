//! Grids, quadrature rules and `L_p` / sup-norm evaluation on intervals and
//! on the circle.
//!
//! Every norm routine here certifies its own accuracy empirically: periodic
//! trapezoid sums are recomputed on a doubled grid, composite Gauss–Legendre
//! sums on a doubled panel set, until successive values agree to the
//! requested relative tolerance.

mod func;
mod norms;
mod quadrature;
mod search;

pub use func::{Func, Kinks};
pub(crate) use norms::sup_norm_with;
pub use norms::{
    lp_norm_interval, lp_norm_interval_with, lp_norm_periodic, lp_norm_periodic_fn, lp_norm_split_at_crossings,
    sup_norm, IntervalNormOptions, NormEstimate, PeriodicNormEstimate, SupNorm, DEFAULT_INTERVAL_TOL,
    DEFAULT_PERIODIC_TOL,
};
pub use quadrature::{composite_gauss_legendre, gauss_legendre, QuadratureRule, GL_POINTS};
pub use search::golden_section_max;

use crate::error::{Error, Result};

/// A compact interval `[a, b]` with finite endpoints and `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    /// The reference interval `[-1, 1]`.
    pub fn unit() -> Self {
        Interval { a: -1.0, b: 1.0 }
    }

    /// `[-h, h]`.
    pub fn symmetric(h: f64) -> Result<Self> {
        Interval::new(-h, h)
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// Affine map from `[-1, 1]` onto this interval.
    #[inline]
    pub fn from_unit(&self, t: f64) -> f64 {
        self.midpoint() + 0.5 * self.length() * t
    }

    /// Affine map from this interval onto `[-1, 1]`.
    #[inline]
    pub fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / self.length()
    }
}

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() {
            Err(Error::InvalidExponent(p))
        } else if p < 1.0 {
            Err(Error::QuasiNorm(p))
        } else {
            Ok(Exponent(p))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, zero for `p = ∞`.
    #[inline]
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Where a norm is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval(Interval),
    Circle { period: f64 },
}

/// An `L_p` norm specification with Lebesgue measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub p: Exponent,
    pub domain: Domain,
}

impl NormSpec {
    pub fn new(p: f64, domain: Domain) -> Result<Self> {
        if let Domain::Circle { period } = domain {
            if !(period.is_finite() && period > 0.0) {
                return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
            }
        }
        Ok(NormSpec {
            p: Exponent::new(p)?,
            domain,
        })
    }

    /// Evaluates the norm of `f` with the module defaults.
    pub fn norm(&self, f: &Func) -> Result<f64> {
        match (self.domain, self.p.is_infinite()) {
            (Domain::Interval(d), true) => Ok(sup_norm(f, &d, 1e-12).value),
            (Domain::Interval(d), false) => Ok(lp_norm_interval(f, &d, self.p, DEFAULT_INTERVAL_TOL)?.value),
            (Domain::Circle { period }, _) => {
                Ok(lp_norm_periodic_fn(f, period, self.p, 1024, DEFAULT_PERIODIC_TOL)?.value)
            }
        }
    }
}
