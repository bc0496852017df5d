use std::collections::BTreeMap;
use std::fs;
use std::process::Command;

use proptest::prelude::*;
use sharpconst_cli::emit::{from_json, to_csv, to_json, to_svg, CSV_HEADER};
use sharpconst_cli::report::{Extrapolation, NamedValue, ReportRow};
use sharpconst_cli::{execute, run_experiment, CliError, Experiment, ExperimentConfig, Format, Report};

const BIN: &str = env!("CARGO_BIN_EXE_sharp-approx");

fn config(experiment: Experiment, text: &str, out: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig::parse(experiment, text, out.to_path_buf()).unwrap()
}

#[test]
fn json_round_trips_a_real_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = execute(&config(
        Experiment::BernsteinMu,
        "lambda = 1.5\nn_list = 8,12,16,24,32",
        dir.path(),
    ))
    .unwrap();
    assert_eq!(from_json(&to_json(&r)).unwrap(), r);
}

#[test]
fn csv_has_fixed_header_and_lf_endings() {
    let dir = tempfile::tempdir().unwrap();
    let r = execute(&config(
        Experiment::EntireError,
        "function = sin\nsigma = 1.5\nn_list = 8,16",
        dir.path(),
    ))
    .unwrap();
    let csv = to_csv(&r);
    assert!(!csv.contains('\r'));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
}

#[test]
fn empty_format_list_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_experiment(&config(Experiment::FoldDemo, "", &out), &[], None).unwrap();
    assert!(!out.exists());
}

#[test]
fn all_formats_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_experiment(
        &config(Experiment::FoldDemo, "M = 2\nn_list = 11,41", dir.path()),
        &[Format::Csv, Format::Json, Format::Svg],
        Some(2),
    )
    .unwrap();
    for ext in ["csv", "json", "svg"] {
        assert!(dir.path().join(format!("fold-demo.{ext}")).is_file(), "{ext}");
    }
    let svg = fs::read_to_string(dir.path().join("fold-demo.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"width="800""#) && svg.contains(r#"height="500""#));
    assert!(r
        .rows
        .iter()
        .all(|row| row.raw.unwrap() <= 1.0 + 1e-12 && row.defect.unwrap() < 1e-13));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = execute(&config(
        Experiment::PeriodicLimit,
        "function = abs-sin\nn_list = 8,12,16",
        dir.path(),
    ))
    .unwrap();
    let echo: String = first.config.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    let second = execute(&config(Experiment::PeriodicLimit, &echo, dir.path())).unwrap();
    assert_eq!(first.without_timings(), second.without_timings());
}

#[test]
fn seeded_restarts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let text = "p = 1.5\ns = 0\nn_list = 4,6,8\nrestarts = 3\nseed = 11\nJ = 32";
    let a = execute(&config(Experiment::NikolskiiLimit, text, dir.path())).unwrap();
    let b = execute(&config(Experiment::NikolskiiLimit, text, dir.path())).unwrap();
    assert_eq!(a.without_timings(), b.without_timings());
    assert!(a.diagnostic("restart_max_relative_gap").unwrap() < 1e-6);
}

#[test]
fn validation_errors_are_collected() {
    let dir = tempfile::tempdir().unwrap();
    let err = ExperimentConfig::parse(
        Experiment::EntireError,
        "sigma = -1\nwidth = 3\nn_list =",
        dir.path().into(),
    )
    .unwrap_err();
    let CliError::Validation(list) = &err else {
        panic!("{err}")
    };
    let text = err.to_string();
    for needle in [
        "missing required key 'function'",
        "sigma must be positive",
        "unknown key 'width'",
        "n_list must be nonempty",
    ] {
        assert!(text.contains(needle), "{needle} not in {list:?}");
    }
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.cfg");
    let bad = dir.path().join("bad.cfg");
    fs::write(&good, "M = 1\nn_list = 5,9\n").unwrap();
    fs::write(&bad, "n_list =\n").unwrap();
    let out = dir.path().join("out");
    let status = |cfg: &std::path::Path| {
        Command::new(BIN)
            .args(["fold-demo", "--config"])
            .arg(cfg)
            .arg("--out")
            .arg(&out)
            .args(["--format", "csv"])
            .output()
            .unwrap()
    };
    assert_eq!(status(&good).status.code(), Some(0));
    assert!(out.join("fold-demo.csv").is_file());
    let o = status(&bad);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_list must be nonempty"));
}

#[test]
fn help_lists_experiments_and_keys() {
    let o = Command::new(BIN).arg("--help").output().unwrap();
    let text = String::from_utf8_lossy(&o.stdout);
    for e in Experiment::ALL {
        assert!(text.contains(e.name()), "{}", e.name());
    }
    assert!(text.contains("X_max") && text.contains("lambda"));
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3f64..1e3,
        1e-300f64..1e-290
    ]
}

fn opt_finite() -> impl Strategy<Value = Option<f64>> {
    proptest::option::of(finite())
}

prop_compose! {
    fn row()(n in 1usize..1000, raw in opt_finite(), scaled in opt_finite(), defect in opt_finite(),
             residual in opt_finite(), tol in finite(), wall_ms in 0.0f64..1e6, failed in any::<bool>()) -> ReportRow {
        ReportRow { n, raw, scaled, defect, residual, tol, error: failed.then(|| "no convergence".into()), wall_ms }
    }
}

prop_compose! {
    fn report()(rows in proptest::collection::vec(row(), 0..8), limit in opt_finite(), err in opt_finite(),
                gamma in finite(), seed in any::<u64>(), diag in opt_finite(), by_order in proptest::collection::vec(finite(), 0..3)) -> Report {
        let mut config = BTreeMap::new();
        config.insert("lambda".to_string(), "1".to_string());
        Report {
            experiment: "bernstein-mu".into(),
            seed,
            config,
            gamma,
            rows,
            extrapolation: limit.map(|limit| Extrapolation { limit, error_estimate: err, model: 2, residual: None, limits_by_order: by_order }),
            comparison: None,
            diagnostics: vec![NamedValue { name: "d".into(), value: diag }],
            notes: vec!["a \"quoted\" note".into()],
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn json_round_trip_is_exact(r in report()) {
        prop_assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn renderings_are_deterministic(r in report()) {
        prop_assert_eq!(to_csv(&r), to_csv(&r.clone()));
        let svg = to_svg(&r);
        prop_assert!(svg.ends_with("</svg>\n"));
        prop_assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}

#[test]
fn polynomial_target_has_zero_limit() {
    let dir = tempfile::tempdir().unwrap();
    let r = execute(&config(Experiment::BernsteinMu, "lambda = 2\nn_list = 4,8", dir.path())).unwrap();
    assert!(r.rows.iter().all(|row| row.raw == Some(0.0)));
    assert_eq!(r.extrapolation.unwrap().limit, 0.0);
}

#[test]
fn both_sides_of_the_l2_limit_are_close() {
    let dir = tempfile::tempdir().unwrap();
    let r = execute(&config(Experiment::NikolskiiLimit, "p = 2\ns = 0", dir.path())).unwrap();
    let c = r.comparison.unwrap();
    assert!(
        (c.left - 0.564190).abs() < 1e-3 && (c.right - 0.564190).abs() < 1e-3,
        "{c:?}"
    );
}
