use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{
    lp_norm_periodic_fn, lp_norm_split_at_crossings, Exponent, Func, PeriodicNormEstimate, DEFAULT_PERIODIC_TOL,
};

const REALNESS_TOL: f64 = 1e-12;
const PARSEVAL_TOL: f64 = 1e-10;

/// A trigonometric polynomial `Σ_{|k|≤n} c_k e^{ikx}` of degree `n`,
/// 2π-periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    degree: usize,
    /// `c_{-n}, …, c_0, …, c_n`.
    coeffs: Vec<Complex64>,
    real: bool,
}

impl TrigPoly {
    /// Builds from complex coefficients `c_{-n}..=c_n` (length `2n + 1`).
    /// With `real` set, the conjugate symmetry `c_{-k} = conj(c_k)` is checked.
    pub fn from_complex(coeffs: Vec<Complex64>, real: bool) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "expected 2n+1 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        let degree = coeffs.len() / 2;
        if real {
            let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
            for k in 0..=degree {
                let d = (coeffs[degree + k] - coeffs[degree - k].conj()).norm();
                if d > REALNESS_TOL * scale {
                    return Err(Error::InvalidArgument(format!(
                        "coefficients are not conjugate-symmetric at k = {k}"
                    )));
                }
            }
        }
        Ok(TrigPoly { degree, coeffs, real })
    }

    /// `a_0 + Σ_{k=1}^{n} (a_k cos kx + b_k sin kx)`; `cos` holds `a_0..a_n`,
    /// `sin` holds `b_1..b_n` (shorter slices are zero-padded).
    pub fn from_cos_sin(cos: &[f64], sin: &[f64]) -> Self {
        let degree = cos.len().saturating_sub(1).max(sin.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
        coeffs[degree] = Complex64::new(cos.first().copied().unwrap_or(0.0), 0.0);
        for k in 1..=degree {
            let a = cos.get(k).copied().unwrap_or(0.0);
            let b = sin.get(k - 1).copied().unwrap_or(0.0);
            let c = Complex64::new(0.5 * a, -0.5 * b);
            coeffs[degree + k] = c;
            coeffs[degree - k] = c.conj();
        }
        TrigPoly {
            degree,
            coeffs,
            real: true,
        }
    }

    pub fn zero(degree: usize) -> Self {
        Self::from_cos_sin(&vec![0.0; degree + 1], &[])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `c_k` for `|k| ≤ n`, zero beyond the degree.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.degree {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(self.degree as i64 + k) as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Cosine and sine coefficients `(a_0..a_n, b_1..b_n)` of the real part.
    pub fn cos_sin(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.degree;
        let mut a = vec![self.coeff(0).re];
        let mut b = Vec::with_capacity(n);
        for k in 1..=n as i64 {
            let s = self.coeff(k) + self.coeff(-k);
            let d = self.coeff(k) - self.coeff(-k);
            a.push(s.re);
            b.push(-d.im);
        }
        (a, b)
    }

    pub fn eval_complex(&self, x: f64) -> Complex64 {
        let n = self.degree as i64;
        let w = Complex64::from_polar(1.0, x);
        let mut z = Complex64::from_polar(1.0, -(n as f64) * x);
        let mut s = Complex64::new(0.0, 0.0);
        for c in &self.coeffs {
            s += c * z;
            z *= w;
        }
        s
    }

    /// Value at `x`; the real part when the polynomial is flagged real.
    pub fn eval(&self, x: f64) -> f64 {
        if self.real {
            let n = self.degree;
            let mut s = self.coeffs[n].re;
            let w = Complex64::from_polar(1.0, x);
            let mut z = w;
            for k in 1..=n {
                s += 2.0 * (self.coeffs[n + k] * z).re;
                z *= w;
            }
            s
        } else {
            self.eval_complex(x).re
        }
    }

    /// The `s`-th derivative: `c_k ↦ (ik)^s c_k`.
    pub fn derivative(&self, s: u32) -> TrigPoly {
        let n = self.degree as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = i as i64 - n;
                c * Complex64::new(0.0, k as f64).powu(s)
            })
            .collect();
        TrigPoly {
            degree: self.degree,
            coeffs,
            real: self.real,
        }
    }

    pub fn padded(&self, degree: usize) -> TrigPoly {
        if degree <= self.degree {
            return self.clone();
        }
        let pad = degree - self.degree;
        let zero = Complex64::new(0.0, 0.0);
        let mut coeffs = vec![zero; pad];
        coeffs.extend_from_slice(&self.coeffs);
        coeffs.extend(std::iter::repeat(zero).take(pad));
        TrigPoly {
            degree,
            coeffs,
            real: self.real,
        }
    }

    /// `alpha * self + other`, normalized to the larger degree.
    pub fn axpy(&self, alpha: f64, other: &TrigPoly) -> TrigPoly {
        let deg = self.degree.max(other.degree);
        let a = self.padded(deg);
        let b = other.padded(deg);
        TrigPoly {
            degree: deg,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| alpha * x + y).collect(),
            real: a.real && b.real,
        }
    }

    pub fn scaled(&self, alpha: f64) -> TrigPoly {
        TrigPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| alpha * c).collect(),
            real: self.real,
        }
    }

    /// `√(2π Σ |c_k|²)`.
    pub fn parseval_l2(&self) -> f64 {
        (2.0 * PI * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Default trapezoid grid for degree-`n` inputs.
    pub fn default_grid(&self) -> usize {
        1024.max(32 * (self.degree + 1))
    }

    /// `‖Q‖_{L_p([0, 2π))}`. Finite `p` integrates `|Q|^p` piecewise between
    /// the sign changes of `Q` on the default grid, so the rule stays
    /// spectrally accurate at the kinks of `|Q|^p`; `p = 2` is cross-checked
    /// against Parseval.
    pub fn lp_norm(&self, p: Exponent) -> Result<PeriodicNormEstimate> {
        if p.is_infinite() {
            return lp_norm_periodic_fn(&self.to_func(), 2.0 * PI, p, self.default_grid(), DEFAULT_PERIODIC_TOL);
        }
        let m = self.default_grid();
        let h = 2.0 * PI / m as f64;
        let cuts: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();
        let split = lp_norm_split_at_crossings(|x| self.eval(x), &cuts, p, DEFAULT_PERIODIC_TOL)?;
        let est = PeriodicNormEstimate {
            value: split.value,
            grid: m,
            rel_change: split.rel_change,
            tol: DEFAULT_PERIODIC_TOL,
        };
        if p.value() == 2.0 {
            let exact = self.parseval_l2();
            let scale = exact.max(f64::MIN_POSITIVE);
            if (est.value - exact).abs() > PARSEVAL_TOL * scale {
                return Err(Error::CrossCheck(format!(
                    "quadrature L2 norm {} disagrees with Parseval value {exact}",
                    est.value
                )));
            }
        }
        Ok(est)
    }

    pub fn to_func(&self) -> Func {
        let q = self.clone();
        Func::new(move |x| q.eval(x))
    }
}
