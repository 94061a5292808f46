//! Library half of the `seedstable` command-line tool: configurations,
//! experiment drivers and report writers.

pub mod config;
pub mod experiments;
pub mod output;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration values.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] seedstable::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// 2 for usage, configuration and input-schema problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(seedstable::Error::Schema { .. } | seedstable::Error::InvalidArgument(_)) => 2,
            _ => 1,
        }
    }
}

/// Runs `f` on a pool of `workers` threads, or on rayon's global pool.
pub fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    match workers {
        None => f(),
        Some(0) => Err(CliError::Usage("workers must be at least 1".into())),
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w).build()?.install(f),
    }
}
