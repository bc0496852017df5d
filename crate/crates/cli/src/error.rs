use thiserror::Error;

/// Failures of the experiment harness.
#[derive(Debug, Error)]
pub enum CliError {
    /// Every problem found in a configuration, one message each.
    #[error("{}", .0.join("\n"))]
    Validation(Vec<String>),

    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("experiment failed: {0}")]
    Numerical(#[from] sharpconst::error::Error),

    #[error("every row failed")]
    AllRowsFailed,

    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

impl CliError {
    /// Process exit code: 1 for input problems, 2 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_)
            | CliError::ReadConfig { .. }
            | CliError::Write { .. }
            | CliError::ThreadPool(_) => 1,
            CliError::Numerical(_) | CliError::AllRowsFailed => 2,
        }
    }
}
