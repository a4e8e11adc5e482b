//! The `direct`, `inverse` and `bound` commands. Each returns the complete
//! CSV text; rows are computed in parallel and emitted in `(m, n)` order.

use std::fmt::{self, Write as _};

use super::config::{ConfigError, RunConfig, Target};
use crate::assembly::ProblemSpec;
use crate::error::Error;
use crate::galerkin::{error_norms, norms_of, solve_direct};
use crate::inverse::{collage_bound, recover_parameter, Recovery};
use crate::par::Execution;
use crate::pwpoly::PiecewisePoly;

pub const DIRECT_HEADER: &str = "m,l2_error,h1semi_error,h1_error";
pub const SOLUTION_HEADER: &str = "m,x,u_m";
pub const INVERSE_HEADER: &str = "m,n,j_star,objective_value,objective,normalization";
pub const BOUND_HEADER: &str = "m,n,h1_error,collage_bound,ratio";

/// Samples per solution dump when no exact solution is configured.
pub const SOLUTION_SAMPLES: usize = 64;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Numerical(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPositiveDefinite { .. } | Error::DimensionMismatch { .. } => {
                CliError::Numerical(e)
            }
            other => CliError::Config(ConfigError {
                key: None,
                message: other.to_string(),
            }),
        }
    }
}

/// Fixed-width scientific rendering, 13 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.12e}")
}

fn problem(cfg: &RunConfig) -> Result<ProblemSpec, CliError> {
    let f = PiecewisePoly::polynomial(&cfg.f_coeffs)?;
    Ok(ProblemSpec::new(cfg.alpha, cfg.beta, cfg.j_true, f)?)
}

fn exact(cfg: &RunConfig) -> Result<Option<PiecewisePoly>, CliError> {
    cfg.exact_coeffs
        .as_deref()
        .map(PiecewisePoly::polynomial)
        .transpose()
        .map_err(CliError::from)
}

fn require_exact(cfg: &RunConfig, command: &str) -> Result<PiecewisePoly, CliError> {
    exact(cfg)?.ok_or_else(|| {
        CliError::Config(ConfigError {
            key: Some("exact_coeffs".into()),
            message: format!("required by `{command}`"),
        })
    })
}

/// Direct solves for every `m`: error norms when the exact solution is
/// known, otherwise `u_m` sampled on a uniform grid.
pub fn cmd_direct(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let spec = problem(cfg)?;
    let exact = exact(cfg)?;
    let rows = Execution::default().map(&cfg.m, |&m| -> Result<String, CliError> {
        let sol = solve_direct(&spec, m, cfg.normalization)?;
        match &exact {
            Some(u) => {
                let e = error_norms(&sol, u)?;
                Ok(format!("{m},{},{},{}\n", fmt_real(e.l2), fmt_real(e.h1semi), fmt_real(e.h1)))
            }
            None => {
                let mut out = String::new();
                for i in 0..=SOLUTION_SAMPLES {
                    let x = i as f64 / SOLUTION_SAMPLES as f64;
                    let _ = writeln!(out, "{m},{},{}", fmt_real(x), fmt_real(sol.solution.eval(x)?));
                }
                Ok(out)
            }
        }
    });
    let header = if exact.is_some() { DIRECT_HEADER } else { SOLUTION_HEADER };
    collect(header, rows)
}

/// The target of the inverse and bound commands for resolution `m`.
fn target(cfg: &RunConfig, spec: &ProblemSpec, m: usize) -> Result<PiecewisePoly, CliError> {
    match cfg.target {
        Target::Galerkin => Ok(solve_direct(spec, m, cfg.normalization)?.solution),
        Target::Exact => require_exact(cfg, "target = exact"),
    }
}

/// `(m, n)` cells in output order; an exact target has no `m`.
fn cells(cfg: &RunConfig) -> Vec<(Option<usize>, usize)> {
    match cfg.target {
        Target::Galerkin => cfg
            .m
            .iter()
            .flat_map(|&m| cfg.n.iter().map(move |&n| (Some(m), n)))
            .collect(),
        Target::Exact => cfg.n.iter().map(|&n| (None, n)).collect(),
    }
}

fn m_label(m: Option<usize>) -> String {
    m.map_or_else(|| "exact".to_string(), |m| m.to_string())
}

/// Recovers `j` for each `(m, n)` cell from the target built at `j_true`.
pub fn cmd_inverse(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let spec = problem(cfg)?;
    let rows = Execution::default().map(&cells(cfg), |&(m, n)| -> Result<String, CliError> {
        let y = target(cfg, &spec, m.unwrap_or(1))?;
        let settings = Recovery {
            n,
            j_range: (cfg.j_lo, cfg.j_hi),
            objective: cfg.objective,
            norm: cfg.normalization,
            tol: cfg.tol,
        };
        let res = recover_parameter(&y, &spec.f, &settings)?;
        Ok(format!(
            "{},{n},{},{},{},{}\n",
            m_label(m),
            fmt_real(res.j_star),
            fmt_real(res.objective_value),
            res.objective_kind,
            res.norm
        ))
    });
    collect(INVERSE_HEADER, rows)
}

/// Compares the collage bound at `j_true` with the true `H^1` error.
pub fn cmd_bound(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let spec = problem(cfg)?;
    let u = require_exact(cfg, "bound")?;
    let rows = Execution::default().map(&cells(cfg), |&(m, n)| -> Result<String, CliError> {
        let y = target(cfg, &spec, m.unwrap_or(1))?;
        let err = norms_of(&u.sub(&y))?.h1;
        let bound = collage_bound(&y, &spec, n, cfg.normalization)?;
        Ok(format!(
            "{},{n},{},{},{}\n",
            m_label(m),
            fmt_real(err),
            fmt_real(bound),
            fmt_real(bound / err)
        ))
    });
    collect(BOUND_HEADER, rows)
}

fn collect(header: &str, rows: Vec<Result<String, CliError>>) -> Result<String, CliError> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row?);
    }
    Ok(out)
}
