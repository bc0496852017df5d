use super::{composite_gauss_legendre, gauss_legendre, golden_section_max, Exponent, Func, Interval, GL_POINTS};
use crate::error::{Error, Result};

/// Default relative tolerance of the periodic grid-doubling check.
pub const DEFAULT_PERIODIC_TOL: f64 = 1e-9;
/// Default relative tolerance of the panel-doubling check on intervals.
pub const DEFAULT_INTERVAL_TOL: f64 = 1e-10;

const MAX_PERIODIC_GRID: usize = 1 << 23;
const SUP_SCAN_POINTS: usize = 1024;
const SUP_REFINED_CANDIDATES: usize = 16;

/// Trapezoid-rule `L_p` norm over one period from uniform samples
/// `f(x_0), f(x_0 + h), …, f(x_0 + (M-1)h)`, `h = period / M`.
///
/// `p = ∞` returns the largest sample magnitude.
pub fn lp_norm_periodic(samples: &[f64], period: f64, p: f64) -> Result<f64> {
    let p = Exponent::new(p)?;
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample list".into()));
    }
    if samples.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "periodic norm needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
    }
    let h = period / samples.len() as f64;
    Ok(weighted_norm(samples.iter().map(|&v| (h, v)), p))
}

/// `(Σ w_i |v_i|^p)^{1/p}`, scaled by the largest `|v_i|` so that large `p`
/// cannot overflow; `max |v_i|` for `p = ∞`.
fn weighted_norm(pairs: impl Iterator<Item = (f64, f64)> + Clone, p: Exponent) -> f64 {
    let m = pairs.clone().fold(0.0_f64, |m, (_, v)| m.max(v.abs()));
    if p.is_infinite() || m == 0.0 {
        return m;
    }
    let p = p.value();
    let s: f64 = pairs.map(|(w, v)| w * (v.abs() / m).powf(p)).sum();
    m * s.powf(1.0 / p)
}

/// A periodic norm certified by grid doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicNormEstimate {
    pub value: f64,
    /// Grid size of the accepted value.
    pub grid: usize,
    /// Relative change between the last two grids.
    pub rel_change: f64,
    pub tol: f64,
}

/// `L_p` norm over one period of a periodic function, starting from a grid of
/// `initial_grid` points and doubling until the relative change drops below
/// `tol`. `p = ∞` is a scan-and-refine supremum, never a large-`p` limit.
pub fn lp_norm_periodic_fn(
    f: &Func,
    period: f64,
    p: Exponent,
    initial_grid: usize,
    tol: f64,
) -> Result<PeriodicNormEstimate> {
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
    }
    if p.is_infinite() {
        let domain = Interval::new(0.0, period)?;
        let s = sup_norm(f, &domain, 1e-13 * period);
        return Ok(PeriodicNormEstimate {
            value: s.value,
            grid: SUP_SCAN_POINTS,
            rel_change: 0.0,
            tol,
        });
    }
    let mut m = initial_grid.max(4);
    let sample = |m: usize| -> Vec<f64> {
        let h = period / m as f64;
        (0..m).map(|i| f.eval(i as f64 * h)).collect()
    };
    let mut prev = lp_norm_periodic(&sample(m), period, p.value())?;
    loop {
        m *= 2;
        let cur = lp_norm_periodic(&sample(m), period, p.value())?;
        let rel = relative_change(prev, cur);
        if rel < tol {
            return Ok(PeriodicNormEstimate {
                value: cur,
                grid: m,
                rel_change: rel,
                tol,
            });
        }
        if m >= MAX_PERIODIC_GRID {
            return Err(Error::NonConvergence {
                refinements: m.trailing_zeros() as usize,
                prev,
                last: cur,
            });
        }
        prev = cur;
    }
}

fn relative_change(prev: f64, cur: f64) -> f64 {
    let scale = prev.abs().max(cur.abs());
    if scale == 0.0 {
        0.0
    } else {
        (cur - prev).abs() / scale
    }
}

/// A norm on an interval certified by panel doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub rel_change: f64,
    /// Panels per smooth segment in the accepted rule.
    pub panels: usize,
    pub evaluations: usize,
    pub tol: f64,
}

/// Refinement controls for [`lp_norm_interval_with`].
#[derive(Debug, Clone)]
pub struct IntervalNormOptions {
    pub tol: f64,
    /// Panels per smooth segment before the first doubling.
    pub initial_panels: usize,
    pub max_refinements: usize,
    /// Extra panel boundaries besides the function's kinks.
    pub breakpoints: Vec<f64>,
}

impl Default for IntervalNormOptions {
    fn default() -> Self {
        IntervalNormOptions {
            tol: DEFAULT_INTERVAL_TOL,
            initial_panels: 1,
            max_refinements: 14,
            breakpoints: Vec::new(),
        }
    }
}

/// Composite 32-point Gauss–Legendre `L_p` norm on `domain`, `p < ∞`, with
/// the function's kinks as panel boundaries.
pub fn lp_norm_interval(f: &Func, domain: &Interval, p: Exponent, tol: f64) -> Result<NormEstimate> {
    let opts = IntervalNormOptions {
        tol,
        breakpoints: f.kinks_in(domain),
        ..Default::default()
    };
    lp_norm_interval_with(|x| f.eval(x), domain, p, &opts)
}

/// [`lp_norm_interval`] for a bare closure with explicit refinement options.
pub fn lp_norm_interval_with(
    f: impl Fn(f64) -> f64,
    domain: &Interval,
    p: Exponent,
    opts: &IntervalNormOptions,
) -> Result<NormEstimate> {
    if p.is_infinite() {
        return Err(Error::InvalidArgument(
            "p = inf on an interval is computed by sup_norm".into(),
        ));
    }
    let eval = |panels: usize| -> Result<(f64, usize)> {
        let rule = composite_gauss_legendre(domain, &opts.breakpoints, panels, GL_POINTS)?;
        let vals: Vec<(f64, f64)> = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &w)| (w, f(x)))
            .collect();
        Ok((weighted_norm(vals.iter().copied(), p), vals.len()))
    };
    let mut panels = opts.initial_panels.max(1);
    let (mut prev, mut evals) = eval(panels)?;
    for _ in 0..opts.max_refinements {
        panels *= 2;
        let (cur, n) = eval(panels)?;
        evals += n;
        let rel = relative_change(prev, cur);
        if rel < opts.tol {
            return Ok(NormEstimate {
                value: cur,
                rel_change: rel,
                panels,
                evaluations: evals,
                tol: opts.tol,
            });
        }
        prev = cur;
    }
    let (last, _) = eval(panels * 2)?;
    Err(Error::NonConvergence {
        refinements: opts.max_refinements,
        prev,
        last,
    })
}

/// `L_p` norm, `p < ∞`, of a function that is smooth apart from its sign
/// changes, over the union of the cells `[cuts[i], cuts[i+1]]`.
///
/// Every cell where `f` changes sign is split at the crossing (located by
/// bisection), so that `|f|^p` is smooth on each piece; the pieces carry
/// Gauss–Legendre rules of 8, 16, 32 and 64 points until two successive
/// values agree to `tol`. Cells must be fine enough to hold at most one
/// simple crossing each.
pub fn lp_norm_split_at_crossings(f: impl Fn(f64) -> f64, cuts: &[f64], p: Exponent, tol: f64) -> Result<NormEstimate> {
    if p.is_infinite() {
        return Err(Error::InvalidArgument(
            "p = inf on an interval is computed by sup_norm".into(),
        ));
    }
    if cuts.len() < 2 || cuts.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("cuts must be strictly increasing".into()));
    }
    let values: Vec<f64> = cuts.iter().map(|&x| f(x)).collect();
    let mut pieces = Vec::with_capacity(cuts.len() + cuts.len() / 4);
    for i in 0..cuts.len() - 1 {
        let (a, b) = (cuts[i], cuts[i + 1]);
        let (fa, fb) = (values[i], values[i + 1]);
        if fa * fb < 0.0 {
            let r = bisect_root(&f, a, b, fa);
            pieces.push((a, r));
            pieces.push((r, b));
        } else {
            pieces.push((a, b));
        }
    }
    pieces.retain(|(a, b)| b > a);

    let mut evaluations = cuts.len();
    let eval = |points: usize, evaluations: &mut usize| -> Result<f64> {
        let base = gauss_legendre(points)?;
        let mut pairs = Vec::with_capacity(pieces.len() * points);
        for &(a, b) in &pieces {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (t, w) in base.nodes().iter().zip(base.weights()) {
                pairs.push((w * half, f(mid + half * t)));
            }
        }
        *evaluations += pairs.len();
        Ok(weighted_norm(pairs.into_iter(), p))
    };
    let mut points = 8;
    let mut prev = eval(points, &mut evaluations)?;
    while points < 64 {
        points *= 2;
        let cur = eval(points, &mut evaluations)?;
        let rel = relative_change(prev, cur);
        if rel < tol {
            return Ok(NormEstimate {
                value: cur,
                rel_change: rel,
                panels: pieces.len(),
                evaluations,
                tol,
            });
        }
        prev = cur;
    }
    let last = eval(2 * points, &mut evaluations)?;
    Err(Error::NonConvergence {
        refinements: 3,
        prev,
        last,
    })
}

/// A sign change of `f` in `[a, b]`, given `f(a) = fa` and `f(a) f(b) < 0`.
fn bisect_root(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Supremum of `|f|` on an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: f64,
}

/// Dense scan of `|f|` (1024 uniform points plus the kinks) followed by
/// golden-section refinement of the most promising local maxima to abscissa
/// tolerance `tol`.
pub fn sup_norm(f: &Func, domain: &Interval, tol: f64) -> SupNorm {
    sup_norm_with(|x| f.eval(x), domain, &f.kinks_in(domain), tol)
}

pub(crate) fn sup_norm_with(f: impl Fn(f64) -> f64, domain: &Interval, kinks: &[f64], tol: f64) -> SupNorm {
    let n = SUP_SCAN_POINTS;
    let h = domain.length() / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| domain.a() + i as f64 * h).collect();
    xs[n - 1] = domain.b();
    xs.extend_from_slice(kinks);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x).abs()).collect();

    let last = xs.len() - 1;
    let mut cands: Vec<usize> = (0..=last)
        .filter(|&i| {
            let l = if i == 0 { f64::NEG_INFINITY } else { vals[i - 1] };
            let r = if i == last { f64::NEG_INFINITY } else { vals[i + 1] };
            vals[i] >= l && vals[i] >= r
        })
        .collect();
    cands.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    cands.truncate(SUP_REFINED_CANDIDATES);

    let mut best = SupNorm {
        value: vals[0],
        argmax: xs[0],
    };
    for i in cands {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(last)];
        let (x, v) = golden_section_max(|x| f(x).abs(), lo, hi, tol.max(f64::EPSILON * hi.abs()));
        let (x, v) = if vals[i] > v { (xs[i], vals[i]) } else { (x, v) };
        if v > best.value {
            best = SupNorm { value: v, argmax: x };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn grid(f: impl Fn(f64) -> f64, period: f64, m: usize) -> Vec<f64> {
        (0..m).map(|i| f(i as f64 * period / m as f64)).collect()
    }

    #[test]
    fn periodic_cos_l2() {
        let s = grid(f64::cos, 2.0 * PI, 4096);
        let v = lp_norm_periodic(&s, 2.0 * PI, 2.0).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn periodic_constant_l3() {
        let s = vec![1.0; 64];
        let v = lp_norm_periodic(&s, 2.0 * PI, 3.0).unwrap();
        assert!((v - (2.0 * PI).powf(1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn periodic_cos_l1() {
        let s = grid(f64::cos, 2.0 * PI, 1 << 16);
        let v = lp_norm_periodic(&s, 2.0 * PI, 1.0).unwrap();
        assert!((v - 4.0).abs() < 1e-8, "{v}");
    }

    #[test]
    fn periodic_errors() {
        assert!(matches!(
            lp_norm_periodic(&[], 1.0, 2.0),
            Err(Error::InvalidArgument(_))
        ));
        let e = lp_norm_periodic(&[1.0; 8], 1.0, 0.5).unwrap_err();
        assert!(e.to_string().contains("quasi-norm out of scope"));
        assert!(lp_norm_periodic(&[1.0; 3], 1.0, 2.0).is_err());
    }

    #[test]
    fn periodic_inf_is_max_sample() {
        let v = lp_norm_periodic(&[0.5, -2.0, 1.0, 0.0], 1.0, f64::INFINITY).unwrap();
        assert_eq!(v, 2.0);
    }

    #[test]
    fn certified_periodic_l1_of_cos() {
        let f = Func::new(f64::cos);
        let est = lp_norm_periodic_fn(&f, 2.0 * PI, Exponent::new(1.0).unwrap(), 1024, 1e-9).unwrap();
        assert!((est.value - 4.0).abs() < 1e-8);
        assert!(est.rel_change < 1e-9);
    }

    #[test]
    fn interval_examples() {
        let d = Interval::unit();
        let x = lp_norm_interval(&Func::new(|x| x), &d, Exponent::new(2.0).unwrap(), 1e-12).unwrap();
        assert!((x.value - (2.0_f64 / 3.0).sqrt()).abs() < 1e-13);
        let one = lp_norm_interval(&Func::new(|_| 1.0), &d, Exponent::new(5.0).unwrap(), 1e-12).unwrap();
        assert!((one.value - 2.0_f64.powf(0.2)).abs() < 1e-13);
        let abs = Func::new(f64::abs).with_kinks(crate::numcore::Kinks::Points(vec![0.0]));
        let a = lp_norm_interval(&abs, &d, Exponent::new(1.0).unwrap(), 1e-12).unwrap();
        assert!((a.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn interval_reports_nonconvergence() {
        let d = Interval::unit();
        let opts = IntervalNormOptions {
            tol: 1e-15,
            max_refinements: 2,
            ..Default::default()
        };
        // sqrt-singular derivative: needs many refinements
        let err = lp_norm_interval_with(
            |x: f64| (x.abs() + 1e-300).powf(0.01).sin(),
            &d,
            Exponent::new(1.0).unwrap(),
            &opts,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { refinements: 2, .. }));
    }

    #[test]
    fn sup_examples() {
        let d = Interval::unit();
        let s = sup_norm(&Func::new(|x| x * x - 0.5), &d, 1e-12);
        assert!((s.value - 0.5).abs() < 1e-12);
        assert!([-1.0, 0.0, 1.0].iter().any(|&c| (s.argmax - c).abs() < 1e-6));

        let c = sup_norm(&Func::new(f64::cos), &Interval::new(0.0, 2.0 * PI).unwrap(), 1e-12);
        assert!((c.value - 1.0).abs() < 1e-12);
        assert!(c.argmax.abs() < 1e-6 || (c.argmax - 2.0 * PI).abs() < 1e-6);

        let a = sup_norm(&Func::new(|x: f64| x.abs() - 0.25), &d, 1e-12);
        assert!((a.value - 0.75).abs() < 1e-12);
        assert!((a.argmax.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sup_finds_narrow_interior_peak() {
        let f = Func::new(|x: f64| (-(x - 0.123_456).powi(2) * 1e6).exp());
        let s = sup_norm(&f, &Interval::unit(), 1e-12);
        assert!((s.value - 1.0).abs() < 1e-10);
    }
}
