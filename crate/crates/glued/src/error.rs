use thiserror::Error;

/// Errors surfaced by the command-line layer. Exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] glued_core::Error),
    #[error("invalid group spec {spec:?}: {reason}")]
    GroupSpec { spec: String, reason: String },
    #[error("invalid vertex: {0}")]
    Vertex(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown suite {0:?} (expected core, finite, cube, lef, dynamics or all)")]
    UnknownSuite(String),
    #[error("unknown check {check:?} in suite {suite}")]
    UnknownCheck { suite: String, check: String },
    #[error("PV_BUDGET must be a positive integer, got {0:?}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;
