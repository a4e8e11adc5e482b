//! Command-line front end shared by the `vicollage` binary and the tests.

pub mod commands;
pub mod config;

use std::path::Path;

pub use commands::{cmd_bound, cmd_direct, cmd_inverse, CliError};
pub use config::{ConfigError, Preset, RunConfig, Target};

/// Environment variable capping sweep concurrency.
pub const THREADS_ENV: &str = "VICOLLAGE_THREADS";

/// Sizes the global thread pool from `VICOLLAGE_THREADS`. Thread count never
/// changes output bytes.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(raw) = value else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|t| *t >= 1)
        .ok_or_else(|| {
            CliError::Config(ConfigError {
                key: Some(THREADS_ENV.into()),
                message: format!("expected a positive integer, got `{raw}`"),
            })
        })?;
    #[cfg(feature = "parallel")]
    {
        // a pool that is already initialized keeps its size
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(RunConfig::parse(&text)?)
}

/// Writes `csv` to `path`, or to stdout when `path` is `None` or `-`.
pub fn emit(csv: &str, path: Option<&Path>) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, csv)?,
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(csv.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Runs a reproduction preset.
pub fn repro(preset: Preset, norm: crate::basis::Normalization) -> Result<String, CliError> {
    let cfg = preset.config(norm);
    match preset {
        Preset::Table1 => cmd_direct(&cfg),
        Preset::Table2 => cmd_inverse(&cfg),
    }
}
