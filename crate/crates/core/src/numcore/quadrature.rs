use std::f64::consts::PI;

use super::Interval;
use crate::error::{Error, Result};

/// Points per Gauss–Legendre panel used by the composite rules.
pub const GL_POINTS: usize = 32;

/// A quadrature rule `∫ f ≈ Σ w_i f(x_i)` on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: Interval,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// The same rule transplanted affinely onto `target`.
    pub fn mapped(&self, target: Interval) -> QuadratureRule {
        let scale = target.length() / self.domain.length();
        let nodes = self
            .nodes
            .iter()
            .map(|&x| target.a() + (x - self.domain.a()) * scale)
            .collect();
        let weights = self.weights.iter().map(|&w| w * scale).collect();
        QuadratureRule {
            nodes,
            weights,
            domain: target,
        }
    }
}

/// The `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are found by Newton iteration on `P_n` from Tricomi's initial
/// guesses; the rule integrates polynomials of degree `2n - 1` exactly.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss-Legendre rule needs n >= 1".into()));
    }
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: Interval::unit(),
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule: `domain` is cut at every breakpoint lying
/// inside it, and each resulting segment is split into `panels` equal panels
/// carrying a `points`-point rule.
pub fn composite_gauss_legendre(
    domain: &Interval,
    breakpoints: &[f64],
    panels: usize,
    points: usize,
) -> Result<QuadratureRule> {
    if panels == 0 {
        return Err(Error::InvalidArgument("need at least one panel".into()));
    }
    let base = gauss_legendre(points)?;
    let mut cuts = vec![domain.a()];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > domain.a() && x < domain.b())
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(domain.b());

    let mut nodes = Vec::with_capacity((cuts.len() - 1) * panels * points);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for seg in cuts.windows(2) {
        let h = (seg[1] - seg[0]) / panels as f64;
        for k in 0..panels {
            let lo = seg[0] + k as f64 * h;
            let hi = if k + 1 == panels { seg[1] } else { lo + h };
            if hi <= lo {
                continue;
            }
            let panel = base.mapped(Interval::new(lo, hi)?);
            nodes.extend_from_slice(panel.nodes());
            weights.extend_from_slice(panel.weights());
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: *domain,
    })
}
