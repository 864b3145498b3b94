//! Command-line driver for `crich-core`: JSON interchange formats, a
//! rayon-backed executor, brute-force oracles and the acceptance suite.

pub mod cli;
pub mod formats;
pub mod oracle;
pub mod selftest;
pub mod workers;

pub use workers::Workers;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] crich_core::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_cost_guard() => cli::EXIT_COST,
            _ => cli::EXIT_INPUT,
        }
    }
}
