//! Entire functions of exponential type `σ`, represented by truncated
//! cardinal series
//!
//! ```text
//! g(x) = Σ_{|j|≤J} c_j · sinc(σx/π − j),    sinc(t) = sin(πt)/(πt),
//! ```
//!
//! so that `g(jπ/σ) = c_j`. The type constraint is exact by construction;
//! only the truncation to `|j| ≤ J` and the finite integration window are
//! approximations, and the latter is reported through
//! [`TruncationDiagnostic`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numcore::{lp_norm_split_at_crossings, sup_norm_with, Exponent, Func, Interval};

/// Below this `|u|` the sinc derivatives are summed from their Taylor series;
/// the closed forms cancel badly near the removable singularity.
const SERIES_RADIUS: f64 = 1.0;

/// Highest supported derivative order.
pub const MAX_DERIVATIVE: usize = 3;

/// Default truncation half-width.
pub const DEFAULT_J: usize = 128;

/// Default window `X_max = (J + 64) π / σ`.
pub fn default_window(j: usize, sigma: f64) -> f64 {
    (j as f64 + 64.0) * PI / sigma
}

/// `S^{(s)}(u)` for `S(u) = sin(u)/u`, `s ≤ 3`.
pub fn sinc_derivative(s: usize, u: f64) -> f64 {
    if u.abs() < SERIES_RADIUS {
        return sinc_derivative_series(s, u);
    }
    let (sn, cs) = u.sin_cos();
    let r = 1.0 / u;
    match s {
        0 => sn * r,
        1 => (cs - sn * r) * r,
        2 => (-sn - 2.0 * cs * r + 2.0 * sn * r * r) * r,
        3 => (-cs + 3.0 * sn * r + 6.0 * cs * r * r - 6.0 * sn * r * r * r) * r,
        _ => f64::NAN,
    }
}

/// Taylor series `S(u) = Σ (-1)^k u^{2k} / (2k+1)!`, differentiated termwise.
fn sinc_derivative_series(s: usize, u: f64) -> f64 {
    let mut sum = 0.0;
    // coefficient (-1)^k / (2k+1)!
    let mut a = 1.0;
    for k in 0..20usize {
        if k > 0 {
            a = -a / ((2 * k) as f64 * (2 * k + 1) as f64);
        }
        let e = 2 * k;
        if e < s {
            continue;
        }
        let falling: f64 = ((e - s + 1)..=e).map(|m| m as f64).product();
        let term = a * falling * u.powi((e - s) as i32);
        sum += term;
        if k > 2 && term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// A truncated cardinal series of exponential type `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandLimited {
    sigma: f64,
    half_width: usize,
    /// `c_{-J}, …, c_J`.
    coeffs: Vec<f64>,
}

impl BandLimited {
    /// `coeffs` holds `c_{-J}..=c_J`, so its length must be odd.
    pub fn new(sigma: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "type sigma must be positive, got {sigma}"
            )));
        }
        if coeffs.len() % 2 == 0 || coeffs.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "expected 2J+1 coefficients with J >= 1, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        let half_width = coeffs.len() / 2;
        Ok(BandLimited {
            sigma,
            half_width,
            coeffs,
        })
    }

    /// The single shifted kernel `c_j = 1` at index `j`.
    pub fn unit_sample(sigma: f64, half_width: usize, j: i64) -> Result<Self> {
        let mut c = vec![0.0; 2 * half_width + 1];
        let idx = half_width as i64 + j;
        if idx < 0 || idx as usize >= c.len() {
            return Err(Error::InvalidArgument(format!("index {j} outside |j| <= {half_width}")));
        }
        c[idx as usize] = 1.0;
        Self::new(sigma, c)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The truncation half-width `J`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `c_j`, zero for `|j| > J`.
    pub fn coeff(&self, j: i64) -> f64 {
        let idx = self.half_width as i64 + j;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            0.0
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Sample point `jπ/σ`.
    pub fn node(&self, j: i64) -> f64 {
        j as f64 * PI / self.sigma
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_derivative_unchecked(0, x)
    }

    /// `g^{(s)}(x)` for `s ≤ 3`.
    pub fn derivative_at(&self, s: usize, x: f64) -> Result<f64> {
        if s > MAX_DERIVATIVE {
            return Err(Error::DerivativeOrder(s));
        }
        Ok(self.eval_derivative_unchecked(s, x))
    }

    fn eval_derivative_unchecked(&self, s: usize, x: f64) -> f64 {
        let j = self.half_width as i64;
        let sx = self.sigma * x;
        if s == 0 {
            // at a sample point every other kernel vanishes
            let t = sx / PI;
            let r = t.round();
            if (t - r).abs() <= 4.0 * f64::EPSILON * r.abs().max(1.0) {
                return self.coeff(r as i64);
            }
        }
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| {
                let u = sx - (i as i64 - j) as f64 * PI;
                if s == 0 && u == 0.0 {
                    c
                } else {
                    c * sinc_derivative(s, u)
                }
            })
            .sum();
        sum * self.sigma.powi(s as i32)
    }

    /// The `s`-th derivative as an evaluator, `s ≤ 3`.
    pub fn derivative(&self, s: usize) -> Result<Func> {
        if s > MAX_DERIVATIVE {
            return Err(Error::DerivativeOrder(s));
        }
        let g = self.clone();
        Ok(Func::new(move |x| g.eval_derivative_unchecked(s, x)))
    }

    /// `x ↦ g(x / tau)`, a function of type `σ / tau` with the same samples.
    pub fn dilated(&self, tau: f64) -> Result<BandLimited> {
        BandLimited::new(self.sigma / tau, self.coeffs.clone())
    }

    pub fn to_func(&self) -> Func {
        let g = self.clone();
        Func::new(move |x| g.eval(x))
    }

    /// Smallest admissible window for [`BandLimited::lp_norm`].
    pub fn min_window(&self) -> f64 {
        (self.half_width as f64 + 1.0) * PI / self.sigma
    }

    /// `‖g‖_{L_p([−X, X])}` with the outer-mass diagnostic.
    pub fn lp_norm(&self, p: Exponent, x_max: f64) -> Result<(f64, TruncationDiagnostic)> {
        self.lp_norm_with_tol(p, x_max, WINDOW_NORM_TOL)
    }

    pub fn lp_norm_with_tol(&self, p: Exponent, x_max: f64, tol: f64) -> Result<(f64, TruncationDiagnostic)> {
        let needed = self.min_window();
        if !(x_max >= needed * (1.0 - 1e-12)) {
            return Err(Error::WindowTooSmall {
                x_max,
                j: self.half_width,
                needed,
            });
        }
        windowed_lp_norm(|x| self.eval(x), self.sigma, p, x_max, tol)
    }
}

pub(crate) const WINDOW_NORM_TOL: f64 = 1e-9;

/// How much of a windowed norm sits near the window edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationDiagnostic {
    /// Share of `∫|g|^p` carried by `0.9 X ≤ |x| ≤ X` (for `p = ∞`, the ratio
    /// of the outer supremum to the overall supremum).
    pub outer_mass_fraction: f64,
    pub window: Interval,
}

impl TruncationDiagnostic {
    /// Whether the windowed value may be read as an estimate of the norm on ℝ.
    pub fn is_negligible(&self) -> bool {
        self.outer_mass_fraction < 1e-6
    }
}

/// `L_p([−X, X])` norm of a type-`σ` function with panels aligned to the
/// cardinal grid `π/σ`, and the outer 10% of the window split off.
pub(crate) fn windowed_lp_norm(
    g: impl Fn(f64) -> f64,
    sigma: f64,
    p: Exponent,
    x_max: f64,
    tol: f64,
) -> Result<(f64, TruncationDiagnostic)> {
    let window = Interval::symmetric(x_max)?;
    let inner = Interval::symmetric(0.9 * x_max)?;
    let left = Interval::new(-x_max, -0.9 * x_max)?;
    let right = Interval::new(0.9 * x_max, x_max)?;
    let spacing = PI / sigma;
    let breaks = |d: &Interval| -> Vec<f64> {
        let k0 = (d.a() / spacing).ceil() as i64;
        let k1 = (d.b() / spacing).floor() as i64;
        (k0..=k1).map(|k| k as f64 * spacing).collect()
    };

    if p.is_infinite() {
        let sup = |d: &Interval| sup_norm_with(&g, d, &breaks(d), 1e-12 * x_max).value;
        let all = sup(&inner).max(sup(&left)).max(sup(&right));
        let outer = sup(&left).max(sup(&right));
        let frac = if all == 0.0 { 0.0 } else { outer / all };
        return Ok((
            all,
            TruncationDiagnostic {
                outer_mass_fraction: frac,
                window,
            },
        ));
    }

    // cells of an eighth of the cardinal spacing, split at sign changes
    let piece = |d: &Interval| -> Result<f64> {
        let cells = ((d.length() / spacing) * 8.0).ceil().max(1.0) as usize;
        let h = d.length() / cells as f64;
        let cuts: Vec<f64> = (0..=cells)
            .map(|i| if i == cells { d.b() } else { d.a() + i as f64 * h })
            .collect();
        Ok(lp_norm_split_at_crossings(&g, &cuts, p, tol)?.value.powf(p.value()))
    };
    let mid = piece(&inner)?;
    let outer = piece(&left)? + piece(&right)?;
    let total = mid + outer;
    let frac = if total == 0.0 { 0.0 } else { outer / total };
    Ok((
        total.powf(1.0 / p.value()),
        TruncationDiagnostic {
            outer_mass_fraction: frac,
            window,
        },
    ))
}

/// `x ↦ (2N+1)^{-1} Σ_{|k|≤N} g(x + 2πak)`: the shift average that carries a
/// decaying function toward a `2πa`-periodic one.
pub fn periodize_average(g: &Func, a: f64, n: usize) -> Func {
    let g = g.clone();
    let shift = 2.0 * PI * a;
    let count = (2 * n + 1) as f64;
    Func::new(move |x| {
        let n = n as i64;
        (-n..=n).map(|k| g.eval(x + shift * k as f64)).sum::<f64>() / count
    })
}
