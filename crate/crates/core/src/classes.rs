//! Function classes: moduli of continuity, Hölder classes `H_ω`, growth
//! classes `M_{C,N}`, the folding extension, and the class-level lower-bound
//! experiment for Lipschitz functions.
//!
//! The supremum over a class is never computed. The experiment evaluates a
//! fixed candidate family and therefore certifies lower bounds only.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::extremal::{remez_periodic, RemezOptions};
use crate::limits::{sweep, validate_n_list, Diagnostic, DriverReport};
use crate::numcore::{Func, Interval, Kinks};

/// Sample count of the subadditivity check.
const SUBADDITIVITY_SAMPLES: usize = 100;

/// A modulus of continuity `ω`: continuous, nondecreasing, subadditive, with
/// `ω(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModulusOfContinuity {
    /// `ω(t) = t^λ`, `0 < λ ≤ 1`.
    Power(f64),
    /// Piecewise-linear interpolation of a table starting at `(0, 0)`,
    /// continued past the last node by the chord `t · ω(T)/T`.
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}

impl ModulusOfContinuity {
    pub fn power(lambda: f64) -> Result<Self> {
        let w = ModulusOfContinuity::Power(lambda);
        w.validate()?;
        Ok(w)
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let w = ModulusOfContinuity::Tabulated { grid, values };
        w.validate()?;
        Ok(w)
    }

    /// The Lipschitz modulus `ω(t) = t`.
    pub fn lipschitz() -> Self {
        ModulusOfContinuity::Power(1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ModulusOfContinuity::Power(l) => t.powf(*l),
            ModulusOfContinuity::Tabulated { grid, values } => {
                let last = grid.len() - 1;
                if t >= grid[last] {
                    return t * values[last] / grid[last];
                }
                let k = grid.partition_point(|&g| g <= t).max(1) - 1;
                let w = (t - grid[k]) / (grid[k + 1] - grid[k]);
                values[k] + w * (values[k + 1] - values[k])
            }
        }
    }

    /// Scale over which the defining properties are sampled.
    fn span(&self) -> f64 {
        match self {
            ModulusOfContinuity::Power(_) => 1.0,
            ModulusOfContinuity::Tabulated { grid, .. } => *grid.last().unwrap_or(&1.0),
        }
    }

    /// Checks `ω(0) = 0`, monotonicity, and subadditivity on a 100-point grid
    /// to `1e-12`.
    pub fn validate(&self) -> Result<()> {
        match self {
            ModulusOfContinuity::Power(l) => {
                if !(l.is_finite() && *l > 0.0 && *l <= 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "power modulus needs 0 < lambda <= 1, got {l}"
                    )));
                }
            }
            ModulusOfContinuity::Tabulated { grid, values } => {
                if grid.len() < 2 || grid.len() != values.len() {
                    return Err(Error::InvalidArgument(
                        "tabulated modulus needs matching grid and values with at least two nodes".into(),
                    ));
                }
                if grid[0] != 0.0 || values[0] != 0.0 {
                    return Err(Error::InvalidArgument("tabulated modulus must start at (0, 0)".into()));
                }
                if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().chain(values).any(|v| !v.is_finite()) {
                    return Err(Error::InvalidArgument(
                        "tabulated grid must be finite and strictly increasing".into(),
                    ));
                }
            }
        }
        let span = self.span();
        let ts: Vec<f64> = (0..SUBADDITIVITY_SAMPLES)
            .map(|i| span * i as f64 / (SUBADDITIVITY_SAMPLES - 1) as f64)
            .collect();
        let ws: Vec<f64> = ts.iter().map(|&t| self.eval(t)).collect();
        if ws[0] != 0.0 {
            return Err(Error::InvalidArgument("modulus must vanish at 0".into()));
        }
        if ws.windows(2).any(|w| w[1] < w[0] - 1e-12) {
            return Err(Error::InvalidArgument("modulus must be nondecreasing".into()));
        }
        for (i, &a) in ts.iter().enumerate() {
            for (j, &b) in ts.iter().enumerate().skip(i) {
                if self.eval(a + b) > ws[i] + ws[j] + 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "modulus is not subadditive at t1 = {a}, t2 = {b}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The growth class `M_{C,N}` of functions with `|f(x)| ≤ C (1 + |x|)^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthClassSpec {
    c: f64,
    n: f64,
}

impl GrowthClassSpec {
    pub fn new(c: f64, n: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "growth constant C must be positive, got {c}"
            )));
        }
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "growth order N must be non-negative, got {n}"
            )));
        }
        Ok(GrowthClassSpec { c, n })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn bound(&self, x: f64) -> f64 {
        self.c * (1.0 + x.abs()).powf(self.n)
    }

    /// Largest `|f(x)| / (C (1 + |x|)^N)` over the sample points.
    pub fn worst_ratio(&self, f: &Func, points: &[f64]) -> f64 {
        points
            .iter()
            .map(|&x| f.eval(x).abs() / self.bound(x))
            .fold(0.0, f64::max)
    }
}

/// The `4M`-periodic folding of `f` from `[−M, M]` onto the line:
/// `f̃ = f ∘ h` with `h(x) = (−1)^k (x − 2Mk)` on `[−M, M] + 2Mk`.
///
/// `f̃` agrees with `f` on `[−M, M]` and inherits its modulus of continuity.
pub fn fold_extend(f: &Func, m: f64) -> Result<Func> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "fold half-width must be positive, got {m}"
        )));
    }
    let f = f.clone();
    Ok(Func::new(move |x| f.eval(fold_point(x, m))).with_kinks(Kinks::Lattice {
        offset: m,
        spacing: 2.0 * m,
    }))
}

/// The folding map `h`, reduced through `[−M, 3M)` so that shifts by `4M`
/// give the same value.
pub fn fold_point(x: f64, m: f64) -> f64 {
    if (-m..=m).contains(&x) {
        return x;
    }
    let u = (x + m).rem_euclid(4.0 * m) - m;
    if u <= m {
        u
    } else {
        2.0 * m - u
    }
}

/// Triangular wave with slopes `±slope`, the given period, zero mean,
/// `f(0) = 0` and maximum `slope · period / 4` at a quarter period.
pub fn sawtooth(period: f64, slope: f64) -> Result<Func> {
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
    }
    if !(slope.is_finite() && slope > 0.0) {
        return Err(Error::InvalidArgument(format!("slope must be positive, got {slope}")));
    }
    Ok(Func::new(move |x| {
        let u = (x / period + 0.25).rem_euclid(1.0) - 0.25;
        slope * period * (0.25 - (u - 0.25).abs())
    })
    .with_kinks(Kinks::Lattice {
        offset: period / 4.0,
        spacing: period / 2.0,
    }))
}

/// Outcome of a grid-level Hölder check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderCheck {
    pub ok: bool,
    /// `max |f(x) − f(y)| / ω(|x − y|)` over grid pairs.
    pub worst_ratio: f64,
}

/// Samples all pairs of a uniform grid of `grid` points on `domain`.
///
/// Passing is necessary for `f ∈ H_ω(domain)`, not sufficient.
pub fn holder_membership(f: &Func, omega: &ModulusOfContinuity, domain: &Interval, grid: usize) -> HolderCheck {
    let grid = grid.max(2);
    let xs: Vec<f64> = (0..grid)
        .map(|i| domain.a() + domain.length() * i as f64 / (grid - 1) as f64)
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..grid {
        for j in i + 1..grid {
            let w = omega.eval(xs[j] - xs[i]);
            if w > 0.0 {
                worst = worst.max((fs[j] - fs[i]).abs() / w);
            }
        }
    }
    HolderCheck {
        ok: worst <= 1.0 + 1e-9,
        worst_ratio: worst,
    }
}

/// Members of `H_{ω,0}` (functions in `H_ω` vanishing at 0) shipped as
/// test candidates, with names.
pub fn h_omega0_candidates(omega: &ModulusOfContinuity) -> Result<Vec<(String, Func)>> {
    let mut out = Vec::new();
    let w = omega.clone();
    let signed = Func::new(move |x: f64| x.signum() * w.eval(x.abs()));
    let w = omega.clone();
    let even = Func::new(move |x: f64| w.eval(x.abs())).with_kinks(Kinks::Points(vec![0.0]));
    out.push(("folded signed modulus, M = 1".to_string(), fold_extend(&signed, 1.0)?));
    out.push(("folded even modulus, M = 2".to_string(), fold_extend(&even, 2.0)?));
    out.push(("signed modulus".to_string(), signed));
    out.push(("even modulus".to_string(), even));
    if *omega == ModulusOfContinuity::Power(1.0) {
        for (name, period) in [("2pi", 2.0 * PI), ("pi", PI), ("1", 1.0)] {
            out.push((format!("sawtooth, period {name}"), sawtooth(period, 1.0)?));
        }
        out.push((
            "folded identity, M = 3".to_string(),
            fold_extend(&Func::new(|x| x), 3.0)?,
        ));
    }
    Ok(out)
}

/// Largest `|f(x)| / (ω(2)(1 + |x|))` over the sample points.
pub fn growth_ratio(f: &Func, omega: &ModulusOfContinuity, points: &[f64]) -> f64 {
    let spec = GrowthClassSpec {
        c: omega.eval(2.0),
        n: 1.0,
    };
    spec.worst_ratio(f, points)
}

/// Lower bounds `(n + 1) · E(sawtooth_{n+1}, T_n)` for the Lipschitz class,
/// where `sawtooth_{n+1}` has period `2π/(n + 1)` and slope 1.
pub fn class_limit_experiment(
    omega: &ModulusOfContinuity,
    n_list: &[usize],
    opts: &RemezOptions,
) -> Result<DriverReport> {
    if *omega != ModulusOfContinuity::Power(1.0) {
        return Err(Error::InvalidArgument(
            "the class experiment supports only the Lipschitz modulus omega(t) = t".into(),
        ));
    }
    validate_n_list(n_list)?;
    let mut report = sweep(n_list, 1.0, 1, opts.tol, |n| {
        let f = sawtooth(2.0 * PI / (n + 1) as f64, 1.0)?;
        let r = remez_periodic(&f, n, opts)?;
        Ok((r.error(), r.equioscillation_defect))
    })?;
    let scaled: Vec<f64> = report.series.entries().iter().map(|e| e.scaled).collect();
    if let (Some(lo), Some(hi)) = (
        scaled.iter().copied().reduce(f64::min),
        scaled.iter().copied().reduce(f64::max),
    ) {
        report.diagnostics.push(Diagnostic::new("scaled_spread", hi - lo));
        let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
        report.set_extrapolation(Some(crate::limits::ExtrapolationResult {
            limit: mean,
            error_estimate: hi - lo,
            model: 0,
            residual: 0.0,
            limits_by_order: Vec::new(),
        }));
    }
    report.notes.push(
        "values are lower bounds over the Lipschitz class from a fixed candidate family; \
         the scaled column is (n + 1) * E"
            .into(),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_modulus_validation() {
        assert!(ModulusOfContinuity::power(0.5).is_ok());
        assert!(ModulusOfContinuity::power(1.5).is_err());
        assert!(ModulusOfContinuity::power(0.0).is_err());
    }

    #[test]
    fn tabulated_modulus_validation() {
        let ok = ModulusOfContinuity::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 1.5]).unwrap();
        assert!((ok.eval(1.5) - 1.25).abs() < 1e-15);
        assert!((ok.eval(4.0) - 3.0).abs() < 1e-15);
        // convex table fails subadditivity
        assert!(ModulusOfContinuity::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 3.0]).is_err());
        assert!(ModulusOfContinuity::tabulated(vec![0.0, 1.0], vec![0.5, 1.0]).is_err());
        assert!(ModulusOfContinuity::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.5]).is_err());
    }

    #[test]
    fn growth_spec_validation() {
        assert!(GrowthClassSpec::new(0.0, 1.0).is_err());
        assert!(GrowthClassSpec::new(1.0, -1.0).is_err());
        let g = GrowthClassSpec::new(2.0, 1.0).unwrap();
        assert_eq!(g.bound(-1.0), 4.0);
    }

    #[test]
    fn fold_of_identity_is_triangular() {
        let m = 1.5;
        let f = fold_extend(&Func::new(|x| x), m).unwrap();
        for &t in &[0.0, 0.3, 1.0, 2.0, 2.9, 3.0] {
            assert!((f.eval(m + t) - (m - t)).abs() < 1e-15);
        }
        let c = fold_extend(&Func::new(|_| 0.25), m).unwrap();
        assert_eq!(c.eval(17.3), 0.25);
    }

    #[test]
    fn sawtooth_geometry() {
        let f = sawtooth(2.0 * PI, 1.0).unwrap();
        assert!((f.eval(PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert_eq!(f.eval(0.0), 0.0);
        let g = sawtooth(PI, 1.0).unwrap();
        assert!((g.eval(PI / 4.0) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn holder_examples() {
        let d = Interval::unit();
        let w = ModulusOfContinuity::lipschitz();
        let id = holder_membership(&Func::new(|x| x), &w, &d, 50);
        assert!(id.ok && (id.worst_ratio - 1.0).abs() < 1e-12);
        let twice = holder_membership(&Func::new(|x| 2.0 * x), &w, &d, 50);
        assert!(!twice.ok && (twice.worst_ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn class_experiment_rejects_other_moduli() {
        let w = ModulusOfContinuity::Power(0.5);
        assert!(class_limit_experiment(&w, &[1], &RemezOptions::default()).is_err());
    }
}
