//! Flat `key = value` experiment configuration.
//!
//! Lines are `key = value`; blank lines and lines starting with `#` are
//! ignored. Lists are comma separated. Unknown keys are errors, and every
//! problem in a file is reported at once.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sharpconst::bandlimited::DEFAULT_J;
use sharpconst::limits::{DEFAULT_N_LIST, MAX_BERNSTEIN_DEGREE};

use crate::error::CliError;

/// The experiments the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Experiment {
    BernsteinMu,
    EntireError,
    NikolskiiLimit,
    PeriodicLimit,
    ClassLimit,
    FoldDemo,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::BernsteinMu,
        Experiment::EntireError,
        Experiment::NikolskiiLimit,
        Experiment::PeriodicLimit,
        Experiment::ClassLimit,
        Experiment::FoldDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::BernsteinMu => "bernstein-mu",
            Experiment::EntireError => "entire-error",
            Experiment::NikolskiiLimit => "nikolskii-limit",
            Experiment::PeriodicLimit => "periodic-limit",
            Experiment::ClassLimit => "class-limit",
            Experiment::FoldDemo => "fold-demo",
        }
    }

    /// Keys that must be present.
    pub fn required_keys(self) -> &'static [&'static str] {
        match self {
            Experiment::BernsteinMu => &["lambda"],
            Experiment::EntireError => &["function", "sigma"],
            Experiment::NikolskiiLimit => &["p", "s"],
            Experiment::PeriodicLimit => &["function"],
            Experiment::ClassLimit | Experiment::FoldDemo => &[],
        }
    }

    /// Keys that may be present, beyond the required ones.
    pub fn optional_keys(self) -> &'static [&'static str] {
        match self {
            Experiment::BernsteinMu => &["n_list", "remez_tol", "remez_max_iterations", "seed", "experiment"],
            Experiment::EntireError => &[
                "n_list",
                "lambda",
                "remez_tol",
                "remez_max_iterations",
                "seed",
                "experiment",
            ],
            Experiment::NikolskiiLimit => &[
                "n_list",
                "sigma",
                "J",
                "X_max",
                "stationarity_tol",
                "norm_tol",
                "restarts",
                "seed",
                "experiment",
            ],
            Experiment::PeriodicLimit => &[
                "n_list",
                "sigma",
                "remez_tol",
                "remez_max_iterations",
                "seed",
                "experiment",
            ],
            Experiment::ClassLimit => &[
                "n_list",
                "lambda",
                "remez_tol",
                "remez_max_iterations",
                "seed",
                "experiment",
            ],
            Experiment::FoldDemo => &["n_list", "M", "seed", "experiment"],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

/// Target functions for the growing-interval and periodic experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetFunction {
    Abs,
    AbsPower,
    Sin,
    Sawtooth,
    AbsSin,
    Cos2x,
}

impl TargetFunction {
    pub const ALL: [TargetFunction; 6] = [
        TargetFunction::Abs,
        TargetFunction::AbsPower,
        TargetFunction::Sin,
        TargetFunction::Sawtooth,
        TargetFunction::AbsSin,
        TargetFunction::Cos2x,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TargetFunction::Abs => "abs",
            TargetFunction::AbsPower => "abs-power",
            TargetFunction::Sin => "sin",
            TargetFunction::Sawtooth => "sawtooth",
            TargetFunction::AbsSin => "abs-sin",
            TargetFunction::Cos2x => "cos2x",
        }
    }

    pub fn is_periodic(self) -> bool {
        matches!(
            self,
            TargetFunction::Sin | TargetFunction::Sawtooth | TargetFunction::AbsSin | TargetFunction::Cos2x
        )
    }

    /// Type `sigma` used by `periodic-limit` when none is given.
    pub fn default_sigma(self) -> f64 {
        match self {
            TargetFunction::Cos2x => 2.5,
            _ => 1.5,
        }
    }
}

impl FromStr for TargetFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TargetFunction::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<&str> = TargetFunction::ALL.iter().map(|f| f.name()).collect();
            format!("unknown function '{s}' (expected one of {})", names.join(", "))
        })
    }
}

/// Report file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    /// Parses a comma-separated list; the empty string selects nothing.
    pub fn parse_list(s: &str) -> Result<Vec<Format>, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let f = match part {
                "csv" => Format::Csv,
                "json" => Format::Json,
                "svg" => Format::Svg,
                other => return Err(format!("unknown format '{other}' (expected csv, json or svg)")),
            };
            if !out.contains(&f) {
                out.push(f);
            }
        }
        Ok(out)
    }
}

/// Validated parameters of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameters {
    BernsteinMu {
        lambda: f64,
        remez: RemezSettings,
    },
    EntireError {
        function: TargetFunction,
        lambda: Option<f64>,
        sigma: f64,
        remez: RemezSettings,
    },
    NikolskiiLimit {
        p: f64,
        s: usize,
        sigma: f64,
        j: usize,
        x_max: Option<f64>,
        stationarity_tol: f64,
        norm_tol: f64,
        restarts: usize,
    },
    PeriodicLimit {
        function: TargetFunction,
        sigma: f64,
        remez: RemezSettings,
    },
    ClassLimit {
        remez: RemezSettings,
    },
    FoldDemo {
        m: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemezSettings {
    pub tol: f64,
    pub max_iterations: usize,
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_list: Vec<usize>,
    pub params: Parameters,
    pub seed: u64,
    /// Resolved key-value echo, defaults included; re-running from it
    /// reproduces the experiment.
    pub echo: BTreeMap<String, String>,
    pub output_dir: PathBuf,
}

/// Splits a config file into key-value pairs.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut errors = Vec::new();
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                let k = k.trim().to_string();
                if k.is_empty() {
                    errors.push(format!("line {}: missing key", i + 1));
                } else if map.insert(k.clone(), v.trim().to_string()).is_some() {
                    errors.push(format!("line {}: duplicate key '{k}'", i + 1));
                }
            }
            None => errors.push(format!("line {}: expected 'key = value'", i + 1)),
        }
    }
    if errors.is_empty() {
        Ok(map)
    } else {
        Err(CliError::Validation(errors))
    }
}

/// Collects typed values and validation problems.
struct Reader<'a> {
    pairs: &'a BTreeMap<String, String>,
    errors: Vec<String>,
    echo: BTreeMap<String, String>,
}

impl Reader<'_> {
    fn parse<T: FromStr>(&mut self, key: &str) -> Option<T> {
        let raw = self.pairs.get(key)?;
        match raw.parse::<T>() {
            Ok(v) => {
                self.echo.insert(key.to_string(), raw.clone());
                Some(v)
            }
            Err(_) => {
                self.errors.push(format!("{key}: cannot parse '{raw}'"));
                None
            }
        }
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Option<T> {
        if !self.pairs.contains_key(key) {
            self.errors.push(format!("missing required key '{key}'"));
            return None;
        }
        self.parse(key)
    }

    fn or_default<T: FromStr + fmt::Display>(&mut self, key: &str, default: T) -> T {
        if self.pairs.contains_key(key) {
            self.parse(key).unwrap_or(default)
        } else {
            self.echo.insert(key.to_string(), default.to_string());
            default
        }
    }

    fn positive(&mut self, key: &str, v: Option<f64>) -> Option<f64> {
        match v {
            Some(x) if x.is_finite() && x > 0.0 => Some(x),
            Some(x) => {
                self.errors.push(format!("{key} must be positive, got {x}"));
                None
            }
            None => None,
        }
    }

    fn n_list(&mut self, default: &[usize]) -> Vec<usize> {
        let Some(raw) = self.pairs.get("n_list") else {
            let list = default.to_vec();
            self.echo.insert("n_list".into(), join(&list));
            return list;
        };
        let mut list = Vec::new();
        for part in raw.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.parse::<usize>() {
                Ok(n) => list.push(n),
                Err(_) => {
                    self.errors.push(format!("n_list: cannot parse '{part}'"));
                    return Vec::new();
                }
            }
        }
        if list.is_empty() {
            self.errors.push("n_list must be nonempty".into());
        } else if list.contains(&0) {
            self.errors.push("n_list entries must be positive".into());
        } else if list.windows(2).any(|w| w[1] <= w[0]) {
            self.errors.push("n_list must be strictly increasing".into());
        }
        self.echo.insert("n_list".into(), join(&list));
        list
    }

    fn remez(&mut self) -> RemezSettings {
        let tol: f64 = self.or_default("remez_tol", 1e-12);
        let max_iterations = self.or_default("remez_max_iterations", 300usize);
        if !(tol.is_finite() && tol > 0.0) {
            self.errors.push(format!("remez_tol must be positive, got {tol}"));
        }
        if max_iterations == 0 {
            self.errors.push("remez_max_iterations must be positive".into());
        }
        RemezSettings { tol, max_iterations }
    }
}

fn join(list: &[usize]) -> String {
    list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Validates key-value pairs for `experiment`, reporting every problem.
    pub fn from_pairs(
        experiment: Experiment,
        pairs: &BTreeMap<String, String>,
        output_dir: PathBuf,
    ) -> Result<Self, CliError> {
        let mut r = Reader {
            pairs,
            errors: Vec::new(),
            echo: BTreeMap::new(),
        };
        for key in pairs.keys() {
            if !experiment.required_keys().contains(&key.as_str())
                && !experiment.optional_keys().contains(&key.as_str())
            {
                r.errors
                    .push(format!("unknown key '{key}' for experiment {experiment}"));
            }
        }
        if let Some(name) = pairs.get("experiment") {
            if name != experiment.name() {
                r.errors.push(format!(
                    "config names experiment '{name}' but '{experiment}' was requested"
                ));
            }
        }
        r.echo.insert("experiment".into(), experiment.name().into());
        let seed = r.or_default("seed", 0u64);

        let (n_list, params) = match experiment {
            Experiment::BernsteinMu => {
                let lambda = r.required("lambda");
                let lambda = r.positive("lambda", lambda);
                let n_list = r.n_list(&DEFAULT_N_LIST);
                if n_list.last().is_some_and(|&n| n > MAX_BERNSTEIN_DEGREE) {
                    r.errors
                        .push(format!("n_list entries must not exceed {MAX_BERNSTEIN_DEGREE}"));
                }
                let remez = r.remez();
                (n_list, lambda.map(|lambda| Parameters::BernsteinMu { lambda, remez }))
            }
            Experiment::EntireError => {
                let function: Option<TargetFunction> = r.required("function");
                let sigma = r.required("sigma");
                let sigma = r.positive("sigma", sigma);
                let lambda = if pairs.contains_key("lambda") {
                    let l = r.parse("lambda");
                    r.positive("lambda", l)
                } else {
                    None
                };
                if function == Some(TargetFunction::AbsPower) && lambda.is_none() && !pairs.contains_key("lambda") {
                    r.errors.push("function abs-power needs key 'lambda'".into());
                }
                let n_list = r.n_list(&DEFAULT_N_LIST);
                let remez = r.remez();
                let params = match (function, sigma) {
                    (Some(function), Some(sigma)) => Some(Parameters::EntireError {
                        function,
                        lambda,
                        sigma,
                        remez,
                    }),
                    _ => None,
                };
                (n_list, params)
            }
            Experiment::NikolskiiLimit => {
                let p: Option<f64> = r.required("p");
                if let Some(p) = p {
                    if !(p.is_finite() && p >= 1.0) {
                        r.errors.push(format!("p must lie in [1, inf), got {p}"));
                    }
                }
                let s: Option<usize> = r.required("s");
                if let Some(s) = s {
                    if s > 2 {
                        r.errors.push(format!("s must be 0, 1 or 2, got {s}"));
                    }
                }
                let sigma = r.or_default("sigma", 1.0);
                let sigma = r.positive("sigma", Some(sigma));
                let j = r.or_default("J", DEFAULT_J);
                if j < 8 {
                    r.errors.push(format!("J must be at least 8, got {j}"));
                }
                let x_max = if pairs.contains_key("X_max") {
                    let x = r.parse("X_max");
                    r.positive("X_max", x)
                } else {
                    None
                };
                let stationarity_tol: f64 = r.or_default("stationarity_tol", 1e-8);
                let norm_tol: f64 = r.or_default("norm_tol", 1e-8);
                for (k, v) in [("stationarity_tol", stationarity_tol), ("norm_tol", norm_tol)] {
                    if !(v.is_finite() && v > 0.0) {
                        r.errors.push(format!("{k} must be positive, got {v}"));
                    }
                }
                let restarts = r.or_default("restarts", 0usize);
                let n_list = r.n_list(&DEFAULT_N_LIST);
                let params = match (p, s, sigma) {
                    (Some(p), Some(s), Some(sigma)) => Some(Parameters::NikolskiiLimit {
                        p,
                        s,
                        sigma,
                        j,
                        x_max,
                        stationarity_tol,
                        norm_tol,
                        restarts,
                    }),
                    _ => None,
                };
                (n_list, params)
            }
            Experiment::PeriodicLimit => {
                let function: Option<TargetFunction> = r.required("function");
                if let Some(f) = function {
                    if !f.is_periodic() {
                        r.errors.push(format!("function {} is not periodic", f.name()));
                    }
                }
                let sigma = match function {
                    Some(f) => {
                        let s = r.or_default("sigma", f.default_sigma());
                        r.positive("sigma", Some(s))
                    }
                    None => None,
                };
                let n_list = r.n_list(&DEFAULT_N_LIST);
                let remez = r.remez();
                let params = match (function, sigma) {
                    (Some(function), Some(sigma)) => Some(Parameters::PeriodicLimit { function, sigma, remez }),
                    _ => None,
                };
                (n_list, params)
            }
            Experiment::ClassLimit => {
                let lambda = r.or_default("lambda", 1.0);
                if lambda != 1.0 {
                    r.errors
                        .push(format!("class-limit supports only lambda = 1, got {lambda}"));
                }
                let n_list = r.n_list(&[1, 3, 7, 15]);
                let remez = r.remez();
                (n_list, Some(Parameters::ClassLimit { remez }))
            }
            Experiment::FoldDemo => {
                let m = r.or_default("M", 1.0);
                let m = r.positive("M", Some(m));
                let n_list = r.n_list(&[51, 101, 201, 401]);
                if n_list.first().is_some_and(|&n| n < 2) {
                    r.errors.push("fold-demo grid sizes must be at least 2".into());
                }
                (n_list, m.map(|m| Parameters::FoldDemo { m }))
            }
        };

        match params {
            Some(params) if r.errors.is_empty() => Ok(ExperimentConfig {
                experiment,
                n_list,
                params,
                seed,
                echo: r.echo,
                output_dir,
            }),
            _ => Err(CliError::Validation(r.errors)),
        }
    }

    /// Reads and validates a config file's text.
    pub fn parse(experiment: Experiment, text: &str, output_dir: PathBuf) -> Result<Self, CliError> {
        let pairs = parse_pairs(text)?;
        ExperimentConfig::from_pairs(experiment, &pairs, output_dir)
    }
}

/// `--help` text listing experiments and their keys.
pub fn experiments_help() -> String {
    let mut s = String::from("Experiments and config keys (required; optional):\n");
    for e in Experiment::ALL {
        let req = e.required_keys().join(", ");
        let opt: Vec<&str> = e
            .optional_keys()
            .iter()
            .copied()
            .filter(|k| *k != "experiment")
            .collect();
        s.push_str(&format!(
            "  {:<16} required: {}\n  {:<16} optional: {}\n",
            e.name(),
            if req.is_empty() { "(none)" } else { &req },
            "",
            opt.join(", ")
        ));
    }
    let names: Vec<&str> = TargetFunction::ALL.iter().map(|f| f.name()).collect();
    s.push_str(&format!("\nfunction values: {}\n", names.join(", ")));
    s.push_str("Config files hold one 'key = value' per line; '#' starts a comment; lists are comma separated.\n");
    s
}
