//! Batch front end: configs in, CSV tables and JSON sidecars out.

pub mod config;
pub mod run;
pub mod table;

use std::path::Path;
use std::time::Instant;

pub use config::{Command, ExperimentConfig, RawConfig};
pub use run::run;
pub use table::ResultTable;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown config key: {0}")]
    UnknownKey(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] spinforge_core::Error),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        use spinforge_core::Error as E;
        match self {
            CliError::UnknownKey(_) | CliError::Config(_) => 2,
            CliError::Core(
                E::Capacity { .. } | E::Argument(_) | E::UnsupportedParity(_) | E::Aliasing { .. },
            ) => 2,
            CliError::Core(_) | CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Runs `cfg`, then writes the CSV to `out` and the metadata sidecar next to it.
pub fn execute(cfg: &ExperimentConfig, out: &Path, jobs: Option<usize>) -> Result<ResultTable, CliError> {
    let start = Instant::now();
    let table = run(cfg, jobs)?.with_meta("wall_time_s", start.elapsed().as_secs_f64());
    table::write_table(&table, out)?;
    Ok(table)
}
