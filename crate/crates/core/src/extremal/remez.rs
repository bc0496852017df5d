//! Multi-point Remez exchange for best uniform approximation by algebraic
//! polynomials on an interval and by trigonometric polynomials on the circle.
//!
//! Each iteration levels the error on the current reference, splits the
//! domain into sign zones at the zeros of the error between consecutive
//! reference nodes, and moves every node to the extremum of its zone. When
//! the global maximum of the error has the wrong sign for its zone it is
//! swapped in for a neighbour, which keeps the levelled error increasing.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::{Approximant, RemezResult};
use crate::error::{Error, Result};
use crate::numcore::{golden_section_max, Func, Interval};
use crate::polyspaces::{ChebPoly, TrigPoly};

/// Controls for the exchange iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemezOptions {
    /// Accept once `(max|e| − |h|) / max|e|` drops below this.
    pub tol: f64,
    pub max_iterations: usize,
    /// Scan points per unit of `n + 1`.
    pub scan_factor: usize,
}

impl Default for RemezOptions {
    fn default() -> Self {
        RemezOptions {
            tol: 1e-12,
            max_iterations: 300,
            scan_factor: 30,
        }
    }
}

/// Reference nodes closer than this (relative to the domain length) count as
/// coalesced.
const MIN_SEPARATION: f64 = 1e-13;
/// Rounding noise of the error function, in units of `ε · scale` per
/// reference node.
const NOISE_ULPS: f64 = 16.0;

/// A signed extremum of the error curve.
#[derive(Debug, Clone, Copy)]
struct Extremum {
    x: f64,
    e: f64,
}

/// Best uniform approximation of `f` on `domain` by polynomials of degree
/// `≤ n`.
pub fn remez_interval(f: &Func, n: usize, domain: &Interval, opts: &RemezOptions) -> Result<RemezResult> {
    let m = n + 2;
    let reference: Vec<f64> = (0..m)
        .map(|i| domain.from_unit(-(PI * i as f64 / (n + 1) as f64).cos()))
        .collect();
    let len = domain.length();
    let count = opts.scan_factor * (n + 1);
    let mut grid: Vec<f64> = (0..=count)
        .map(|i| domain.a() + len * i as f64 / count as f64)
        .collect();
    grid.extend((0..=count).map(|i| domain.from_unit(-(PI * i as f64 / count as f64).cos())));
    grid.extend(f.kinks_in(domain));

    let setup = Setup {
        f,
        lo: domain.a(),
        hi: domain.b(),
        period: None,
        base_grid: grid,
    };
    setup.run(reference, opts, |reference| {
        let (coeffs, h) = solve_interval_system(f, n, domain, reference)?;
        Ok((Approximant::Algebraic(ChebPoly::new(*domain, coeffs)?), h))
    })
}

/// Best uniform approximation of a 2π-periodic `f` by trigonometric
/// polynomials of degree `≤ n`.
pub fn remez_periodic(f: &Func, n: usize, opts: &RemezOptions) -> Result<RemezResult> {
    let m = 2 * n + 2;
    let period = 2.0 * PI;
    let reference: Vec<f64> = (0..m).map(|i| period * i as f64 / m as f64).collect();
    let count = 2 * opts.scan_factor * (n + 1);
    let mut grid: Vec<f64> = (0..count).map(|i| period * i as f64 / count as f64).collect();
    grid.extend(f.kinks().inside(-1e-300, period).into_iter().filter(|&x| x < period));

    let setup = Setup {
        f,
        lo: 0.0,
        hi: period,
        period: Some(period),
        base_grid: grid,
    };
    setup.run(reference, opts, |reference| {
        let (cos, sin, h) = solve_periodic_system(f, n, reference)?;
        Ok((Approximant::Trigonometric(TrigPoly::from_cos_sin(&cos, &sin)), h))
    })
}

struct Setup<'a> {
    f: &'a Func,
    lo: f64,
    hi: f64,
    /// `Some(P)` on the circle `[0, P)`.
    period: Option<f64>,
    base_grid: Vec<f64>,
}

impl Setup<'_> {
    fn run(
        &self,
        mut reference: Vec<f64>,
        opts: &RemezOptions,
        solve: impl Fn(&[f64]) -> Result<(Approximant, f64)>,
    ) -> Result<RemezResult> {
        let len = self.hi - self.lo;
        let mut skewed = false;
        for iteration in 1..=opts.max_iterations {
            let (approx, h) = solve(&reference)?;
            let err = |x: f64| self.f.eval(x) - approx.eval(x);

            let grid = self.scan_grid(&reference);
            let values: Vec<f64> = grid.iter().map(|&x| err(x)).collect();
            let f_scale = grid.iter().map(|&x| self.f.eval(x).abs()).fold(0.0, f64::max);
            let coef_sum: f64 = approx.real_coeffs().iter().map(|c| c.abs()).sum();
            let noise = NOISE_ULPS * reference.len() as f64 * f64::EPSILON * (f_scale + coef_sum);

            let global = self.global_max(&grid, &values, &err);
            let max_err = global.e.abs();
            if max_err <= noise {
                return Ok(exact_result(approx, max_err, reference, iteration, opts.tol));
            }
            if h.abs() <= noise {
                // a reference sharing a symmetry with the target can level at
                // h = 0; restart once from a skewed one
                if skewed {
                    return Err(Error::DegenerateReference(format!(
                        "levelled error {h:e} is at the rounding level"
                    )));
                }
                skewed = true;
                reference = match self.period {
                    None => skewed_reference(&reference),
                    Some(p) => skewed_circular_reference(&reference, p),
                };
                continue;
            }

            let mut points = self.zone_extrema(&reference, h, &grid, &values, &err);
            self.insert_global(&mut points, global);
            let max_err = points.iter().map(|p| p.e.abs()).fold(max_err, f64::max);

            let defect = (max_err - h.abs()) / max_err;
            let noise_limited = defect >= opts.tol && max_err - h.abs() <= noise;
            if let Some(p) = self.period {
                // rotate so the nodes increase within [0, P)
                points.iter_mut().for_each(|q| q.x = q.x.rem_euclid(p));
                let start = (0..points.len())
                    .min_by(|&a, &b| points[a].x.total_cmp(&points[b].x))
                    .unwrap_or(0);
                points.rotate_left(start);
            }
            let new_ref: Vec<f64> = points.iter().map(|p| p.x).collect();

            if defect < opts.tol || noise_limited {
                return Ok(RemezResult {
                    approximant: approx,
                    leveled_error: h,
                    max_error: max_err,
                    reference: new_ref,
                    reference_errors: points.iter().map(|p| p.e).collect(),
                    iterations: iteration,
                    equioscillation_defect: defect,
                    noise_limited,
                    tol: opts.tol,
                });
            }
            check_separation(&new_ref, MIN_SEPARATION * len)?;
            if iteration == opts.max_iterations {
                return Err(Error::MaxIterations {
                    iterations: iteration,
                    defect,
                });
            }
            reference = new_ref;
        }
        unreachable!("loop returns on its last iteration")
    }

    fn scan_grid(&self, reference: &[f64]) -> Vec<f64> {
        let mut grid = self.base_grid.clone();
        let mut nodes = reference.to_vec();
        if let Some(p) = self.period {
            nodes.push(reference[0] + p);
        }
        for w in nodes.windows(2) {
            for k in 1..8 {
                grid.push(w[0] + (w[1] - w[0]) * k as f64 / 8.0);
            }
        }
        grid.extend_from_slice(reference);
        match self.period {
            None => grid.iter_mut().for_each(|x| *x = x.clamp(self.lo, self.hi)),
            Some(p) => grid.iter_mut().for_each(|x| *x = x.rem_euclid(p)),
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        grid
    }

    /// Largest `|e|`, polished around the best grid point.
    fn global_max(&self, grid: &[f64], values: &[f64], err: &impl Fn(f64) -> f64) -> Extremum {
        let k = (0..grid.len())
            .max_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs()))
            .expect("non-empty grid");
        let sign = values[k].signum();
        let (lo, hi) = self.bracket(grid, k);
        let (x, v) = golden_section_max(|x| sign * err(x), lo, hi, 1e-15 * (self.hi - self.lo));
        if v >= sign * values[k] {
            Extremum { x, e: sign * v }
        } else {
            Extremum {
                x: grid[k],
                e: values[k],
            }
        }
    }

    fn bracket(&self, grid: &[f64], k: usize) -> (f64, f64) {
        let last = grid.len() - 1;
        match self.period {
            None => (grid[k.saturating_sub(1)], grid[(k + 1).min(last)]),
            Some(p) => (
                if k == 0 { grid[last] - p } else { grid[k - 1] },
                if k == last { grid[0] + p } else { grid[k + 1] },
            ),
        }
    }

    /// One extremum per sign zone, in reference order.
    fn zone_extrema(
        &self,
        reference: &[f64],
        h: f64,
        grid: &[f64],
        values: &[f64],
        err: &impl Fn(f64) -> f64,
    ) -> Vec<Extremum> {
        let m = reference.len();
        let sign = |i: usize| if i % 2 == 0 { h.signum() } else { -h.signum() };
        // zeros between consecutive nodes (cyclically on the circle)
        let gaps = if self.period.is_some() { m } else { m - 1 };
        let zeros: Vec<f64> = (0..gaps)
            .map(|i| {
                let a = reference[i];
                let b = if i + 1 < m {
                    reference[i + 1]
                } else {
                    reference[0] + self.period.unwrap_or(0.0)
                };
                bisect_sign_change(err, a, b, sign(i))
            })
            .collect();
        (0..m)
            .map(|i| {
                let (a, b) = match self.period {
                    None => (
                        if i == 0 { self.lo } else { zeros[i - 1] },
                        if i + 1 == m { self.hi } else { zeros[i] },
                    ),
                    Some(p) => (if i == 0 { zeros[m - 1] - p } else { zeros[i - 1] }, zeros[i]),
                };
                let zone = Zone {
                    a,
                    b,
                    sign: sign(i),
                    node: reference[i],
                };
                self.zone_max(&zone, grid, values, err)
            })
            .collect()
    }

    /// Maximum of `s·e` over a zone, seeded from the grid and the zone's node.
    fn zone_max(&self, zone: &Zone, grid: &[f64], values: &[f64], err: &impl Fn(f64) -> f64) -> Extremum {
        let Zone { a, b, sign: s, node } = *zone;
        let mut cand: Vec<(f64, f64)> = vec![(a, err(a)), (node, err(node)), (b, err(b))];
        let shifts: &[f64] = match self.period {
            None => &[0.0],
            Some(p) => &[-p, 0.0, p],
        };
        for &shift in shifts {
            let lo = grid.partition_point(|&x| x + shift <= a);
            let hi = grid.partition_point(|&x| x + shift < b);
            cand.extend((lo..hi).map(|k| (grid[k] + shift, values[k])));
        }
        cand.sort_by(|u, v| u.0.total_cmp(&v.0));
        // near-coincident candidates would collapse the polishing bracket
        let min_gap = 1e-9 * (b - a);
        cand.dedup_by(|u, v| {
            if u.0 - v.0 > min_gap {
                return false;
            }
            if s * u.1 > s * v.1 {
                *v = *u;
            }
            true
        });
        let k = (0..cand.len())
            .max_by(|&i, &j| (s * cand[i].1).total_cmp(&(s * cand[j].1)))
            .expect("non-empty");
        let lo = cand[k.saturating_sub(1)].0;
        let hi = cand[(k + 1).min(cand.len() - 1)].0;
        let (x, v) = golden_section_max(|x| s * err(x), lo, hi, 1e-15 * (self.hi - self.lo));
        if v >= s * cand[k].1 {
            Extremum { x, e: s * v }
        } else {
            Extremum {
                x: cand[k].0,
                e: cand[k].1,
            }
        }
    }

    /// Swaps the global maximum into the zone extrema when it is missing.
    fn insert_global(&self, points: &mut Vec<Extremum>, g: Extremum) {
        let best = points.iter().map(|p| p.e.abs()).fold(0.0, f64::max);
        if g.e.abs() <= best {
            return;
        }
        let m = points.len();
        match self.period {
            None => match points.iter().rposition(|p| p.x <= g.x) {
                None => {
                    if points[0].e.signum() == g.e.signum() {
                        points[0] = g;
                    } else {
                        points.insert(0, g);
                        points.pop();
                    }
                }
                Some(j) => {
                    if points[j].e.signum() == g.e.signum() {
                        points[j] = g;
                    } else if j + 1 < m {
                        points[j + 1] = g;
                    } else {
                        points.push(g);
                        points.remove(0);
                    }
                }
            },
            Some(p) => {
                // points span one period starting near points[0]
                let base = points[0].x;
                let g = Extremum {
                    x: base + (g.x - base).rem_euclid(p),
                    e: g.e,
                };
                let j = points.iter().rposition(|q| q.x <= g.x).unwrap_or(0);
                if points[j].e.signum() == g.e.signum() {
                    points[j] = g;
                } else {
                    points[(j + 1) % m] = g;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Zone {
    a: f64,
    b: f64,
    sign: f64,
    node: f64,
}

/// A zero of `err` between `a` and `b`, where `err(a)` has sign `s` and
/// `err(b)` the opposite one.
fn bisect_sign_change(err: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, s: f64) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if s * err(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn exact_result(
    approximant: Approximant,
    max_err: f64,
    reference: Vec<f64>,
    iterations: usize,
    tol: f64,
) -> RemezResult {
    let reference_errors = vec![0.0; reference.len()];
    RemezResult {
        approximant,
        leveled_error: 0.0,
        max_error: max_err,
        reference,
        reference_errors,
        iterations,
        equioscillation_defect: 0.0,
        noise_limited: true,
        tol,
    }
}

/// Solves `p(x_i) + (−1)^i h = f(x_i)` for Chebyshev coefficients and `h`.
fn solve_interval_system(f: &Func, n: usize, domain: &Interval, reference: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = n + 2;
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for (i, &x) in reference.iter().enumerate() {
        let t = domain.to_unit(x).clamp(-1.0, 1.0);
        let (mut t0, mut t1) = (1.0, t);
        a[(i, 0)] = 1.0;
        if n >= 1 {
            a[(i, 1)] = t;
        }
        for k in 2..=n {
            let t2 = 2.0 * t * t1 - t0;
            a[(i, k)] = t2;
            t0 = t1;
            t1 = t2;
        }
        a[(i, n + 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        rhs[i] = f.eval(x);
    }
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("remez reference system".into()))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("remez reference system".into()));
    }
    let coeffs = sol.rows(0, n + 1).iter().copied().collect();
    Ok((coeffs, sol[n + 1]))
}

/// Solves `Q(x_i) + (−1)^i h = f(x_i)` for `Q = a_0 + Σ a_k cos kx + b_k sin kx`.
fn solve_periodic_system(f: &Func, n: usize, reference: &[f64]) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let m = 2 * n + 2;
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for (i, &x) in reference.iter().enumerate() {
        a[(i, 0)] = 1.0;
        for k in 1..=n {
            let (s, c) = (k as f64 * x).sin_cos();
            a[(i, k)] = c;
            a[(i, n + k)] = s;
        }
        a[(i, m - 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        rhs[i] = f.eval(x);
    }
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("periodic remez reference system".into()))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("periodic remez reference system".into()));
    }
    let cos = sol.rows(0, n + 1).iter().copied().collect();
    let sin = sol.rows(n + 1, n).iter().copied().collect();
    Ok((cos, sin, sol[m - 1]))
}

/// Moves every interior node a quarter of the way toward its right neighbour.
fn skewed_reference(nodes: &[f64]) -> Vec<f64> {
    let last = nodes.len() - 1;
    (0..nodes.len())
        .map(|i| {
            if i == 0 || i == last {
                nodes[i]
            } else {
                nodes[i] + 0.25 * (nodes[i + 1] - nodes[i])
            }
        })
        .collect()
}

/// Irregular forward shifts that break any symmetry shared by the target
/// and a uniform reference.
fn skewed_circular_reference(nodes: &[f64], period: f64) -> Vec<f64> {
    let len = nodes.len();
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    (0..len)
        .map(|i| {
            let next = if i + 1 < len { nodes[i + 1] } else { nodes[0] + period };
            nodes[i] + 0.3 * (i as f64 * golden).fract() * (next - nodes[i])
        })
        .collect()
}

fn check_separation(nodes: &[f64], min_gap: f64) -> Result<()> {
    for w in nodes.windows(2) {
        if w[1] - w[0] < min_gap {
            return Err(Error::DegenerateReference(format!(
                "nodes {} and {} coalesced",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::Kinks;

    #[test]
    fn square_by_lines() {
        let r = remez_interval(&Func::new(|x| x * x), 1, &Interval::unit(), &RemezOptions::default()).unwrap();
        assert!((r.leveled_error.abs() - 0.5).abs() < 1e-10);
        let Approximant::Algebraic(p) = &r.approximant else {
            panic!()
        };
        assert!((p.eval(0.3).unwrap() - 0.5).abs() < 1e-10);
        assert!(r.equioscillation_defect < 1e-12);
    }

    #[test]
    fn t3_by_quadratics() {
        let f = Func::new(|x| 4.0 * x * x * x - 3.0 * x);
        let r = remez_interval(&f, 2, &Interval::unit(), &RemezOptions::default()).unwrap();
        assert!((r.leveled_error.abs() - 1.0).abs() < 1e-10);
        assert_eq!(r.reference.len(), 4);
    }

    #[test]
    fn abs_by_lines() {
        let f = Func::new(f64::abs).with_kinks(Kinks::Points(vec![0.0]));
        let r = remez_interval(&f, 1, &Interval::unit(), &RemezOptions::default()).unwrap();
        assert!((r.leveled_error.abs() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn abs_even_degree_needs_skewed_start() {
        let f = Func::new(f64::abs).with_kinks(Kinks::Points(vec![0.0]));
        let r = remez_interval(&f, 12, &Interval::unit(), &RemezOptions::default()).unwrap();
        assert!(r.equioscillation_defect < 1e-12);
        let s = r.reference_errors.iter().map(|e| e.signum()).collect::<Vec<_>>();
        assert!(s.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn polynomial_target_is_exact() {
        let f = Func::new(|x| 1.0 + x - 2.0 * x * x);
        let r = remez_interval(&f, 3, &Interval::unit(), &RemezOptions::default()).unwrap();
        assert!(r.max_error < 1e-13);
        assert_eq!(r.error(), 0.0);
    }

    #[test]
    fn cos2x_by_degree_one() {
        let f = Func::new(|x| (2.0 * x).cos());
        let r = remez_periodic(&f, 1, &RemezOptions::default()).unwrap();
        assert!((r.leveled_error.abs() - 1.0).abs() < 1e-10);
        assert_eq!(r.reference.len(), 4);
    }

    #[test]
    fn trig_member_is_exact() {
        let f = Func::new(|x| 0.3 + x.cos() - 2.0 * (2.0 * x).sin());
        let r = remez_periodic(&f, 2, &RemezOptions::default()).unwrap();
        assert!(r.max_error < 1e-12);
    }

    #[test]
    fn bisection_finds_crossing() {
        let z = bisect_sign_change(&|x: f64| x - 0.3, 0.0, 1.0, -1.0);
        assert!((z - 0.3).abs() < 1e-15);
    }
}
