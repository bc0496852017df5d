//! Dispatch from a validated configuration to the library drivers.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpconst::classes::{
    class_limit_experiment, fold_extend, fold_point, holder_membership, sawtooth, ModulusOfContinuity,
};
use sharpconst::extremal::{
    nikolskii_trig_with, BandLimitedOptions, Family, RemezOptions, SharpConstantProblem, SolverOptions,
};
use sharpconst::limits::{
    abs_power, bernstein_mu, entire_error_growing_interval, nikolskii_limit, periodic_limit_individual,
    BandLimitedParams, Diagnostic, DriverReport,
};
use sharpconst::numcore::{Func, Interval, Kinks};

use crate::config::{ExperimentConfig, Format, Parameters, RemezSettings, TargetFunction};
use crate::emit::write_report;
use crate::error::CliError;
use crate::report::{Report, ReportRow};

fn remez_options(s: &RemezSettings) -> RemezOptions {
    RemezOptions {
        tol: s.tol,
        max_iterations: s.max_iterations,
        ..RemezOptions::default()
    }
}

/// The function a `function = ...` key names.
pub fn target_function(f: TargetFunction, lambda: Option<f64>) -> Func {
    match f {
        TargetFunction::Abs => abs_power(1.0),
        TargetFunction::AbsPower => abs_power(lambda.unwrap_or(1.0)),
        TargetFunction::Sin => Func::new(f64::sin),
        TargetFunction::Sawtooth => sawtooth(2.0 * PI, 1.0).expect("valid period"),
        TargetFunction::AbsSin => Func::new(|x: f64| x.sin().abs()).with_kinks(Kinks::Lattice {
            offset: 0.0,
            spacing: PI,
        }),
        TargetFunction::Cos2x => Func::new(|x: f64| (2.0 * x).cos()),
    }
}

/// Runs the experiment on the current rayon pool.
pub fn execute(config: &ExperimentConfig) -> Result<Report, CliError> {
    let n_list = &config.n_list;
    let driver = match &config.params {
        Parameters::BernsteinMu { lambda, remez } => bernstein_mu(*lambda, n_list, &remez_options(remez))?,
        Parameters::EntireError {
            function,
            lambda,
            sigma,
            remez,
        } => entire_error_growing_interval(
            &target_function(*function, *lambda),
            *sigma,
            n_list,
            &remez_options(remez),
        )?,
        Parameters::NikolskiiLimit {
            p,
            s,
            sigma,
            j,
            x_max,
            stationarity_tol,
            norm_tol,
            restarts,
        } => {
            let solver = SolverOptions {
                stationarity_tol: *stationarity_tol,
                ..SolverOptions::default()
            };
            let params = BandLimitedParams {
                sigma: *sigma,
                j: *j,
                options: BandLimitedOptions {
                    x_max: *x_max,
                    norm_tol: *norm_tol,
                    solver: solver.clone(),
                    ..BandLimitedOptions::default()
                },
            };
            let mut report = nikolskii_limit(*p, *s, n_list, &params, &solver)?;
            if *restarts > 0 {
                restart_check(&mut report, *p, *s, n_list[0], *restarts, config.seed, &solver);
            }
            report
        }
        Parameters::PeriodicLimit { function, sigma, remez } => {
            periodic_limit_individual(&target_function(*function, None), *sigma, n_list, &remez_options(remez))?
        }
        Parameters::ClassLimit { remez } => {
            class_limit_experiment(&ModulusOfContinuity::lipschitz(), n_list, &remez_options(remez))?
        }
        Parameters::FoldDemo { m } => return Ok(fold_demo(config, *m)),
    };
    Ok(Report::from_driver(
        config.experiment.name(),
        config.seed,
        config.echo.clone(),
        &driver,
    ))
}

/// Re-solves the smallest degree from seeded random starts and records the
/// largest relative spread of the resulting constants.
fn restart_check(
    report: &mut DriverReport,
    p: f64,
    s: usize,
    n: usize,
    restarts: usize,
    seed: u64,
    solver: &SolverOptions,
) {
    let Some(base) = report.rows.first().and_then(|r| r.raw) else {
        return;
    };
    let Ok(problem) = SharpConstantProblem::new(Family::Trig(n), p, s) else {
        return;
    };
    let dim = if s % 2 == 0 { n + 1 } else { n };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..restarts {
        let start: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let opts = SolverOptions {
            initial: Some(start),
            ..solver.clone()
        };
        match nikolskii_trig_with(&problem, &opts) {
            Ok(c) => worst = worst.max((c.value - base).abs() / base.abs()),
            Err(e) => report.notes.push(format!("restart at degree {n} failed: {e}")),
        }
    }
    report
        .diagnostics
        .push(Diagnostic::new("restart_max_relative_gap", worst));
}

/// Folds the identity from `[−M, M]` onto the line and checks, on grids of
/// each size in `n_list` over `[−3M, 3M]`, the Lipschitz bound (raw) and the
/// `4M`-periodicity (defect).
fn fold_demo(config: &ExperimentConfig, m: f64) -> Report {
    let id = Func::new(|x| x);
    let folded = fold_extend(&id, m).expect("validated half-width");
    let lip = ModulusOfContinuity::lipschitz();
    let domain = Interval::symmetric(3.0 * m).expect("positive half-width");
    let rows = config
        .n_list
        .iter()
        .map(|&n| {
            let t = Instant::now();
            let check = holder_membership(&folded, &lip, &domain, n);
            let period_defect = (0..n)
                .map(|i| {
                    let x = domain.a() + domain.length() * i as f64 / (n - 1).max(1) as f64;
                    (folded.eval(x + 4.0 * m) - folded.eval(x)).abs()
                })
                .fold(0.0, f64::max);
            ReportRow {
                n,
                raw: Some(check.worst_ratio),
                scaled: Some(check.worst_ratio),
                defect: Some(period_defect),
                residual: None,
                tol: 1e-9,
                error: None,
                wall_ms: t.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect();
    let inside = (0..=100)
        .map(|i| -m + 2.0 * m * i as f64 / 100.0)
        .map(|x| (fold_point(x, m) - x).abs())
        .fold(0.0, f64::max);
    Report {
        experiment: config.experiment.name().to_string(),
        seed: config.seed,
        config: config.echo.clone(),
        gamma: 0.0,
        rows,
        extrapolation: None,
        comparison: None,
        diagnostics: vec![crate::report::NamedValue {
            name: "max_change_inside".into(),
            value: Some(inside),
        }],
        notes: vec![
            "raw is the largest |f(x) - f(y)| / |x - y| over grid pairs; defect is the largest |f(x + 4M) - f(x)|"
                .into(),
        ],
    }
}

/// Runs the experiment on a pool of `jobs` threads (all cores when `None`),
/// writes the requested files and returns the report.
///
/// A report whose rows all failed is still written before the error is
/// returned.
pub fn run_experiment(config: &ExperimentConfig, formats: &[Format], jobs: Option<usize>) -> Result<Report, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| CliError::ThreadPool(e.to_string()))?;
    let report = pool.install(|| execute(config))?;
    write_report(&report, formats, &config.output_dir)?;
    if report.all_failed() {
        return Err(CliError::AllRowsFailed);
    }
    Ok(report)
}
