//! Command implementations behind the `weakgrav` binary.

pub mod config;
pub mod reduced;
pub mod run;
pub mod weakvalue;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analytic::AnalyticError;
use crate::gravity::GravityError;
use crate::oracle::OracleError;
use crate::weak::WeakError;

pub use config::{parse_config, ConfigError, OracleChoice, OutputFormat, RunConfig, SourceSpec, TimeRange};
pub use reduced::{is_reduced, parse_reduced_config, run_compare_reduced, ReducedConfig};
pub use run::{run_compare, run_point, run_scan, ScanRow, ScanTable};
pub use weakvalue::run_weakvalue;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ConfigError),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Weak(#[from] WeakError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<GravityError> for CliError {
    fn from(e: GravityError) -> Self {
        CliError::Analytic(e.into())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Analytic(a) => CliError::Analytic(a),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl CliError {
    /// 0 ok, 1 configuration, 2 singular post-selection, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Weak(WeakError::SingularPostSelection { .. }) => 2,
            CliError::Weak(_) => 1,
            CliError::Analytic(AnalyticError::ApproximationBreakdown(_)) => 3,
            CliError::Analytic(_) => 1,
            CliError::Numerical(_) => 3,
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Directory holding the checked-in benchmark config and golden table.
pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Rewrites the golden CSV from the benchmark config; returns its path.
pub fn golden_regenerate(dir: &Path) -> Result<PathBuf, CliError> {
    let config = parse_config(&read(&dir.join("benchmark.conf"))?)?;
    let table = run_scan(&config, None)?;
    let out = dir.join("benchmark_golden.csv");
    write(&out, &table.to_csv())?;
    Ok(out)
}
