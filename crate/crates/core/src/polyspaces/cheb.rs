use crate::error::{Error, Result};
use crate::numcore::{Func, Interval};

/// Slack, relative to the interval length, allowed outside the domain.
const DOMAIN_SLACK: f64 = 1e-12;

/// An algebraic polynomial `Σ a_k T_k(t)` in the Chebyshev basis, where
/// `t ∈ [-1, 1]` is the affine image of `x ∈ domain`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebPoly {
    domain: Interval,
    coeffs: Vec<f64>,
}

impl ChebPoly {
    pub fn new(domain: Interval, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a polynomial needs at least one coefficient".into(),
            ));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coefficient {c}")));
        }
        Ok(ChebPoly { domain, coeffs })
    }

    pub fn constant(domain: Interval, c: f64) -> Self {
        ChebPoly {
            domain,
            coeffs: vec![c],
        }
    }

    pub fn zero(domain: Interval) -> Self {
        Self::constant(domain, 0.0)
    }

    /// The Chebyshev polynomial `T_k` on `domain`.
    pub fn basis(domain: Interval, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        ChebPoly { domain, coeffs }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Nominal degree, `len(coeffs) - 1` (trailing zeros are not trimmed).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Clenshaw evaluation; rejects points outside the domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let slack = DOMAIN_SLACK * self.domain.length();
        if !(x >= self.domain.a() - slack && x <= self.domain.b() + slack) {
            return Err(Error::OutsideDomain {
                x,
                a: self.domain.a(),
                b: self.domain.b(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Clenshaw evaluation without the domain check.
    #[inline]
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, self.domain.to_unit(x))
    }

    /// Exact derivative, via the backward recurrence
    /// `b_{k-1} = b_{k+1} + 2k a_k`, rescaled by `2 / (b - a)`.
    pub fn derivative(&self) -> ChebPoly {
        let n = self.degree();
        if n == 0 {
            return ChebPoly::zero(self.domain);
        }
        let a = &self.coeffs;
        let mut b = vec![0.0; n + 1];
        for k in (1..=n).rev() {
            b[k - 1] = b.get(k + 1).copied().unwrap_or(0.0) + 2.0 * k as f64 * a[k];
        }
        b[0] *= 0.5;
        b.truncate(n);
        let scale = 2.0 / self.domain.length();
        b.iter_mut().for_each(|c| *c *= scale);
        ChebPoly {
            domain: self.domain,
            coeffs: b,
        }
    }

    /// Raises the nominal degree by zero-padding.
    pub fn padded(&self, degree: usize) -> ChebPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < degree + 1 {
            coeffs.resize(degree + 1, 0.0);
        }
        ChebPoly {
            domain: self.domain,
            coeffs,
        }
    }

    /// Sum of two polynomials on the same domain, normalized to the larger degree.
    pub fn add(&self, other: &ChebPoly) -> Result<ChebPoly> {
        if self.domain != other.domain {
            return Err(Error::InvalidArgument(
                "cannot add polynomials on different domains".into(),
            ));
        }
        let deg = self.degree().max(other.degree());
        let mut out = self.padded(deg);
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
        Ok(out)
    }

    pub fn scaled(&self, alpha: f64) -> ChebPoly {
        ChebPoly {
            domain: self.domain,
            coeffs: self.coeffs.iter().map(|c| alpha * c).collect(),
        }
    }

    /// The polynomial as a shareable evaluator (no domain check).
    pub fn to_func(&self) -> Func {
        let p = self.clone();
        Func::new(move |x| p.eval_unchecked(x))
    }
}

/// `Σ c_k T_k(t)` by Clenshaw's recurrence.
#[inline]
pub(crate) fn clenshaw(c: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    let tt = 2.0 * t;
    for &ck in c[1..].iter().rev() {
        let b0 = ck + tt * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + t * b1 - b2
}
