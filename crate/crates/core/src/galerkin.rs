//! Direct Galerkin solver: `u_m = u0 + sum_k c_k g_{k+2}` with
//! `(S + jM) c = b`, and exact error norms against a known solution.

use crate::assembly::{check_parameter, load, operators, ProblemSpec};
use crate::basis::{h10_basis, Normalization};
use crate::error::Result;
use crate::linalg::norm2;
use crate::pwpoly::{h1semi_inner, l2_inner, PiecewisePoly};

/// Solution of the `m`-dimensional Galerkin problem.
#[derive(Clone, Debug)]
pub struct GalerkinSolution {
    pub spec: ProblemSpec,
    pub m: usize,
    pub norm: Normalization,
    /// Coefficients of `g_3, ..., g_{m+2}`.
    pub coeffs: Vec<f64>,
    /// `u_m` materialized as a piecewise polynomial.
    pub solution: PiecewisePoly,
    /// `|A c - b| / |b|` (absolute when `b = 0`).
    pub relative_residual: f64,
}

pub fn solve_direct(spec: &ProblemSpec, m: usize, norm: Normalization) -> Result<GalerkinSolution> {
    check_parameter(spec.j)?;
    let system = operators(m, norm)?.system(spec.j)?;
    let rhs = load(spec, m, norm)?;
    let coeffs = system.cholesky()?.solve(&rhs)?;

    let residual: Vec<f64> = system
        .mul_vec(&coeffs)?
        .iter()
        .zip(&rhs)
        .map(|(a, b)| a - b)
        .collect();
    let scale = norm2(&rhs);
    let relative_residual = if scale > 0.0 {
        norm2(&residual) / scale
    } else {
        norm2(&residual)
    };

    let solution = h10_basis(m, norm)?
        .iter()
        .zip(&coeffs)
        .fold(spec.lift(), |acc, (g, c)| acc.add(&g.scale(*c)));

    Ok(GalerkinSolution {
        spec: spec.clone(),
        m,
        norm,
        coeffs,
        solution,
        relative_residual,
    })
}

/// `L^2`, `H^1`-seminorm and `H^1` norms of `exact - u_m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub h1semi: f64,
    pub h1: f64,
}

pub fn error_norms(sol: &GalerkinSolution, exact: &PiecewisePoly) -> Result<ErrorNorms> {
    let (a, b) = (exact.eval(0.0)?, exact.eval(1.0)?);
    if (a - sol.spec.alpha).abs() > 1e-12 || (b - sol.spec.beta).abs() > 1e-12 {
        log::warn!(
            "exact solution boundary values ({a}, {b}) differ from the problem data ({}, {})",
            sol.spec.alpha,
            sol.spec.beta
        );
    }
    norms_of(&exact.sub(&sol.solution))
}

/// Norms of an error function `e`.
pub fn norms_of(e: &PiecewisePoly) -> Result<ErrorNorms> {
    let l2sq = l2_inner(e, e)?.max(0.0);
    let semisq = h1semi_inner(e, e)?.max(0.0);
    Ok(ErrorNorms {
        l2: l2sq.sqrt(),
        h1semi: semisq.sqrt(),
        h1: (l2sq + semisq).sqrt(),
    })
}

/// Problem whose exact solution is `u`: `f = -u'' + j u`.
pub fn manufacture(u: &PiecewisePoly, j: f64) -> Result<ProblemSpec> {
    check_parameter(j)?;
    let f = u.derivative().derivative().neg().add(&u.scale(j));
    ProblemSpec::new(u.eval(0.0)?, u.eval(1.0)?, j, f)
}

/// Continuous piecewise-linear interpolant of `u` on the uniform grid of
/// step `2^-level`.
pub fn dyadic_interpolant(u: &PiecewisePoly, level: u32) -> Result<PiecewisePoly> {
    let nodes: Vec<_> = (0..=1u64 << level)
        .map(|q| crate::dyadic::Dyadic::grid(q, level))
        .collect();
    let values = nodes
        .iter()
        .map(|x| u.eval(x.to_f64()))
        .collect::<Result<Vec<f64>>>()?;
    PiecewisePoly::piecewise_linear(&nodes, &values)
}

/// Benchmark problem `alpha = -3`, `beta = -4`, `j = √2` with exact
/// solution `x^2 - 2x - 3`, used by the reproduction commands.
pub mod reference {
    use super::*;

    pub const ALPHA: f64 = -3.0;
    pub const BETA: f64 = -4.0;

    pub fn j_true() -> f64 {
        std::f64::consts::SQRT_2
    }

    /// Coefficients of `u(x) = x^2 - 2x - 3`.
    pub const EXACT_COEFFS: [f64; 3] = [-3.0, -2.0, 1.0];

    /// Coefficients of `f(x) = -2 + √2 (x^2 - 2x - 3)`.
    pub fn forcing_coeffs() -> [f64; 3] {
        let r = j_true();
        [-2.0 - 3.0 * r, -2.0 * r, r]
    }

    pub fn spec() -> ProblemSpec {
        let f = PiecewisePoly::polynomial(&forcing_coeffs()).expect("quadratic");
        ProblemSpec::new(ALPHA, BETA, j_true(), f).expect("valid data")
    }

    pub fn exact() -> PiecewisePoly {
        PiecewisePoly::polynomial(&EXACT_COEFFS).expect("quadratic")
    }
}
