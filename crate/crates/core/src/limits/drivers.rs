use std::time::Instant;

use rayon::prelude::*;

use super::series::{extrapolate, tail_limit, AsymptoticSeries, ExtrapolationResult};
use crate::bandlimited::DEFAULT_J;
use crate::error::{Error, Result};
use crate::extremal::{
    nikolskii_bandlimited, nikolskii_trig_with, remez_interval, remez_periodic, BandLimitedOptions, Family,
    RemezOptions, SharpConstantProblem, SolverOptions,
};
use crate::numcore::{Func, Interval, Kinks};

/// Degrees used when a sweep is not given explicitly.
pub const DEFAULT_N_LIST: [usize; 7] = [8, 12, 16, 24, 32, 48, 64];

/// Highest model order tried by the drivers' extrapolation.
pub const DEFAULT_MAX_ORDER: usize = 3;

/// Surviving entries below which a sweep with failures is not extrapolated.
pub const MIN_SURVIVORS: usize = 5;

/// Largest degree accepted by [`bernstein_mu`].
pub const MAX_BERNSTEIN_DEGREE: usize = 200;

/// One solve of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub n: usize,
    pub raw: Option<f64>,
    pub scaled: Option<f64>,
    /// Equioscillation defect (Remez) or stationarity residual (optimizer).
    pub defect: Option<f64>,
    /// `scaled − limit` once the sweep has been extrapolated.
    pub residual: Option<f64>,
    /// Convergence tolerance the solve ran under.
    pub tol: f64,
    pub wall_ms: f64,
    pub error: Option<String>,
}

/// Two numbers that the theory says coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub left_label: String,
    pub left: f64,
    pub right_label: String,
    pub right: f64,
    pub gap: f64,
    pub relative_gap: f64,
}

impl Comparison {
    pub fn new(left_label: impl Into<String>, left: f64, right_label: impl Into<String>, right: f64) -> Self {
        let gap = (left - right).abs();
        let scale = left.abs().max(right.abs());
        Comparison {
            left_label: left_label.into(),
            left,
            right_label: right_label.into(),
            right,
            gap,
            relative_gap: if scale > 0.0 { gap / scale } else { 0.0 },
        }
    }
}

/// A named scalar produced alongside a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
}

impl Diagnostic {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Diagnostic {
            name: name.into(),
            value,
        }
    }
}

/// Output of an experiment driver.
#[derive(Debug, Clone, PartialEq)]
pub struct DriverReport {
    pub rows: Vec<Row>,
    /// The rows that succeeded.
    pub series: AsymptoticSeries,
    pub extrapolation: Option<ExtrapolationResult>,
    pub comparison: Option<Comparison>,
    pub diagnostics: Vec<Diagnostic>,
    pub notes: Vec<String>,
}

impl DriverReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn all_failed(&self) -> bool {
        !self.rows.is_empty() && self.failures() == self.rows.len()
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|d| d.name == name).map(|d| d.value)
    }

    /// Sets the extrapolation and fills in the row residuals.
    pub fn set_extrapolation(&mut self, extrapolation: Option<ExtrapolationResult>) {
        for row in &mut self.rows {
            row.residual = match (&extrapolation, row.scaled) {
                (Some(e), Some(s)) => Some(s - e.limit),
                _ => None,
            };
        }
        self.extrapolation = extrapolation;
    }
}

/// Checks that a degree list is nonempty, positive and strictly increasing.
pub fn validate_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("n_list must be nonempty".into()));
    }
    if n_list[0] == 0 {
        return Err(Error::InvalidArgument("n_list entries must be positive".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("n_list must be strictly increasing".into()));
    }
    Ok(())
}

/// Runs `solve` for every `n` concurrently and merges the results in order.
///
/// `solve` returns `(raw, defect)`; the series index of degree `n` is
/// `n + shift`.
pub(crate) fn sweep(
    n_list: &[usize],
    gamma: f64,
    shift: usize,
    tol: f64,
    solve: impl Fn(usize) -> Result<(f64, f64)> + Sync,
) -> Result<DriverReport> {
    let outcomes: Vec<(Result<(f64, f64)>, f64)> = n_list
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let out = solve(n);
            (out, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();

    let mut series = AsymptoticSeries::new(gamma)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for (&n, (out, wall_ms)) in n_list.iter().zip(outcomes) {
        let row = match out {
            Ok((raw, defect)) => {
                let raw = if raw.is_finite() {
                    Ok(raw)
                } else {
                    Err(format!("non-finite value {raw}"))
                };
                match raw {
                    Ok(raw) => {
                        series.push(n + shift, raw)?;
                        Row {
                            n,
                            raw: Some(raw),
                            scaled: Some(series.last().expect("just pushed").scaled),
                            defect: Some(defect),
                            residual: None,
                            tol,
                            wall_ms,
                            error: None,
                        }
                    }
                    Err(msg) => failed_row(n, tol, wall_ms, msg),
                }
            }
            Err(e) => failed_row(n, tol, wall_ms, e.to_string()),
        };
        rows.push(row);
    }
    Ok(DriverReport {
        rows,
        series,
        extrapolation: None,
        comparison: None,
        diagnostics: Vec::new(),
        notes: Vec::new(),
    })
}

fn failed_row(n: usize, tol: f64, wall_ms: f64, error: String) -> Row {
    Row {
        n,
        raw: None,
        scaled: None,
        defect: None,
        residual: None,
        tol,
        wall_ms,
        error: Some(error),
    }
}

/// Largest relative increase of the raw values along the sweep; zero for a
/// non-increasing sequence.
pub fn monotonicity_violation(series: &AsymptoticSeries) -> f64 {
    let scale = series.entries().iter().map(|e| e.raw.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    series
        .entries()
        .windows(2)
        .map(|w| ((w[1].raw - w[0].raw) / scale).max(0.0))
        .fold(0.0, f64::max)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

/// `|x|^λ` with its kink at the origin.
pub fn abs_power(lambda: f64) -> Func {
    Func::new(move |x: f64| x.abs().powf(lambda)).with_kinks(Kinks::Points(vec![0.0]))
}

/// Sweep of `n^λ · E_n(|x|^λ, [−1, 1])` and its extrapolated limit.
pub fn bernstein_mu(lambda: f64, n_list: &[usize], opts: &RemezOptions) -> Result<DriverReport> {
    check_positive("lambda", lambda)?;
    validate_n_list(n_list)?;
    let max_n = *n_list.last().expect("validated");
    if max_n > MAX_BERNSTEIN_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degrees above {MAX_BERNSTEIN_DEGREE} are not supported (got {max_n})"
        )));
    }
    let f = abs_power(lambda);
    let mut report = sweep(n_list, lambda, 0, opts.tol, |n| {
        let r = remez_interval(&f, n, &Interval::unit(), opts)?;
        Ok((r.error(), r.equioscillation_defect))
    })?;
    report.diagnostics.push(Diagnostic::new(
        "monotonicity_violation",
        monotonicity_violation(&report.series),
    ));
    let extrapolation = if report.failures() > 0 && report.series.len() < MIN_SURVIVORS {
        report.notes.push(format!(
            "only {} of {} degrees succeeded; at least {MIN_SURVIVORS} are needed to extrapolate",
            report.series.len(),
            report.rows.len()
        ));
        None
    } else {
        extrapolate(&report.series, DEFAULT_MAX_ORDER)
    };
    report.set_extrapolation(extrapolation);
    Ok(report)
}

/// Sweep of `E(f, P_n, [−n/σ, n/σ])` and its extrapolated limit, an estimate
/// of the error of best approximation of `f` by entire functions of type `σ`
/// on the whole line.
///
/// The relation behind this holds for almost every `σ`; the shipped targets
/// (`|x|^λ`, periodic functions with `σ` between integers) are cases where it
/// holds for the `σ` used.
pub fn entire_error_growing_interval(
    f: &Func,
    sigma: f64,
    n_list: &[usize],
    opts: &RemezOptions,
) -> Result<DriverReport> {
    check_positive("sigma", sigma)?;
    validate_n_list(n_list)?;
    let mut report = sweep(n_list, 0.0, 0, opts.tol, |n| {
        let domain = Interval::symmetric(n as f64 / sigma)?;
        let r = remez_interval(f, n, &domain, opts)?;
        Ok((r.error(), r.equioscillation_defect))
    })?;
    report.diagnostics.push(Diagnostic::new("sigma", sigma));
    let extrapolation = extrapolate(&report.series, DEFAULT_MAX_ORDER);
    report.set_extrapolation(extrapolation);
    Ok(report)
}

/// Band-limited side of [`nikolskii_limit`].
#[derive(Debug, Clone, PartialEq)]
pub struct BandLimitedParams {
    pub sigma: f64,
    /// Truncation `|j| ≤ J` of the cardinal series.
    pub j: usize,
    pub options: BandLimitedOptions,
}

impl Default for BandLimitedParams {
    fn default() -> Self {
        BandLimitedParams {
            sigma: 1.0,
            j: DEFAULT_J,
            options: BandLimitedOptions::default(),
        }
    }
}

/// Compares the extrapolated `n^{−s−1/p} · C_n` of trigonometric
/// polynomials with `σ^{−s−1/p}` times the band-limited constant.
pub fn nikolskii_limit(
    p: f64,
    s: usize,
    n_list: &[usize],
    params: &BandLimitedParams,
    solver: &SolverOptions,
) -> Result<DriverReport> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must lie in [1, inf), got {p}")));
    }
    if s > 2 {
        return Err(Error::InvalidArgument(format!("s must be 0, 1 or 2, got {s}")));
    }
    validate_n_list(n_list)?;
    let bl_problem = SharpConstantProblem::new(
        Family::BandLimited {
            sigma: params.sigma,
            j: params.j,
        },
        p,
        s,
    )?;
    let exponent = -(s as f64) - 1.0 / p;

    let (report, bl) = rayon::join(
        || {
            sweep(n_list, exponent, 0, solver.stationarity_tol, |n| {
                let problem = SharpConstantProblem::new(Family::Trig(n), p, s)?;
                let c = nikolskii_trig_with(&problem, solver)?;
                Ok((c.value, c.certificate_gap))
            })
        },
        || nikolskii_bandlimited(&bl_problem, &params.options),
    );
    let mut report = report?;
    let extrapolation = extrapolate(&report.series, DEFAULT_MAX_ORDER);
    report.set_extrapolation(extrapolation);

    match bl {
        Ok(c) => {
            let right = params.sigma.powf(exponent) * c.value;
            report
                .diagnostics
                .push(Diagnostic::new("bandlimited_constant", c.value));
            report
                .diagnostics
                .push(Diagnostic::new("bandlimited_certificate_gap", c.certificate_gap));
            if let Some(d) = c.diagnostic {
                report.diagnostics.push(Diagnostic::new(
                    "bandlimited_outer_mass_fraction",
                    d.outer_mass_fraction,
                ));
                report
                    .diagnostics
                    .push(Diagnostic::new("bandlimited_window", d.window.b()));
                if !d.is_negligible() {
                    report.notes.push(format!(
                        "band-limited extremizer carries a share {:.3e} of its norm near the window edge",
                        d.outer_mass_fraction
                    ));
                }
            }
            if let Some(e) = &report.extrapolation {
                report.comparison = Some(Comparison::new(
                    "trigonometric limit",
                    e.limit,
                    "band-limited constant",
                    right,
                ));
            }
        }
        Err(e) => report.notes.push(format!("band-limited solve failed: {e}")),
    }
    Ok(report)
}

/// Compares two routes to the error of best approximation of a `2π`-periodic
/// `φ` by entire functions of type `σ`.
///
/// The rows are the growing-interval route `E(φ, P_n, [−n/σ, n/σ])`, which
/// converges geometrically and is summarized by its tail. The other side is
/// `E(φ, T_m)` with `m = ⌊σ⌋`, since a best approximant of type `σ` may be
/// taken periodic, that is, a trigonometric polynomial of degree `≤ σ`.
pub fn periodic_limit_individual(
    phi: &Func,
    sigma: f64,
    n_list: &[usize],
    opts: &RemezOptions,
) -> Result<DriverReport> {
    check_positive("sigma", sigma)?;
    validate_n_list(n_list)?;
    let m = sigma.floor() as usize;
    let (report, periodic) = rayon::join(
        || {
            sweep(n_list, 0.0, 0, opts.tol, |n| {
                let domain = Interval::symmetric(n as f64 / sigma)?;
                let r = remez_interval(phi, n, &domain, opts)?;
                Ok((r.error(), r.equioscillation_defect))
            })
        },
        || {
            (0..=m)
                .into_par_iter()
                .map(|k| remez_periodic(phi, k, opts).map(|r| r.error()))
                .collect::<Vec<_>>()
        },
    );
    let mut report = report?;
    report.diagnostics.push(Diagnostic::new("sigma", sigma));
    let extrapolation = tail_limit(&report.series);
    report.set_extrapolation(extrapolation);

    for (k, e) in periodic.iter().enumerate() {
        match e {
            Ok(v) => report
                .diagnostics
                .push(Diagnostic::new(format!("periodic_error_T{k}"), *v)),
            Err(err) => report.notes.push(format!("periodic solve of degree {k} failed: {err}")),
        }
    }
    if let (Some(ext), Some(Ok(right))) = (&report.extrapolation, periodic.last()) {
        report.comparison = Some(Comparison::new(
            "growing-interval limit",
            ext.limit,
            format!("periodic error, degree {m}"),
            *right,
        ));
    }
    Ok(report)
}
