//! Collage-based parameter recovery.
//!
//! For a target `y` and test functions `g_3, ..., g_{n+2}` of `H^1_0`, the
//! residual of the variational equation is affine in the parameter:
//!
//! ```text
//! r_k(j) = a_j(y, g_{k+2}) - x*(g_{k+2}) = s_k + j t_k
//! s_k = ∫ y' g'_{k+2} - ∫ f g_{k+2},    t_k = ∫ y g_{k+2}
//! ```
//!
//! Two objectives are minimized over `j`: the absolute residual sum
//! `|sum_k r_k(j)|`, and the discrete `H^1_0` dual norm
//! `sqrt(r(j)ᵀ G⁻¹ r(j))`. The dual norm divided by the coercivity
//! constant `min(1, j)` bounds `‖y - x_j‖_{H^1}` from above, up to the
//! truncation of the test space.

use std::fmt;
use std::str::FromStr;

use crate::assembly::{check_parameter, operators, ProblemSpec};
use crate::basis::{h10_basis, Normalization};
use crate::error::{domain, Error, Result};
use crate::linalg::{norm2, Cholesky};
use crate::par::Execution;
use crate::pwpoly::{h1semi_inner, l2_inner, PiecewisePoly};

/// Residual coefficients `r_k(j) = s_k + j t_k`, `k = 1..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualAffine {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
}

impl ResidualAffine {
    pub fn new(s: Vec<f64>, t: Vec<f64>) -> Result<Self> {
        if s.len() != t.len() {
            return Err(Error::DimensionMismatch {
                expected: s.len(),
                got: t.len(),
            });
        }
        Ok(Self { s, t })
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `r(j)` as a vector.
    pub fn at(&self, j: f64) -> Vec<f64> {
        self.s.iter().zip(&self.t).map(|(s, t)| s + j * t).collect()
    }

    /// `(A, B) = (sum s_k, sum t_k)`, summed in index order.
    pub fn sums(&self) -> (f64, f64) {
        let a = self.s.iter().fold(0.0, |acc, v| acc + v);
        let b = self.t.iter().fold(0.0, |acc, v| acc + v);
        (a, b)
    }

    /// The first `n` residuals.
    pub fn truncate(&self, n: usize) -> ResidualAffine {
        ResidualAffine {
            s: self.s[..n].to_vec(),
            t: self.t[..n].to_vec(),
        }
    }
}

/// Residual coefficients of target `y` against `g_3, ..., g_{n+2}`.
pub fn residuals(
    y: &PiecewisePoly,
    f: &PiecewisePoly,
    n: usize,
    norm: Normalization,
) -> Result<ResidualAffine> {
    let basis = h10_basis(n, norm)?;
    let rows = Execution::default().try_map_range(n, |k| {
        let g = &basis[k];
        Ok::<_, Error>((
            h1semi_inner(y, g)? - l2_inner(f, g)?,
            l2_inner(y, g)?,
        ))
    })?;
    let (s, t) = rows.into_iter().unzip();
    Ok(ResidualAffine { s, t })
}

/// `|sum_k (s_k + j t_k)| = |A + j B|`.
pub fn objective_abs_sum(r: &ResidualAffine, j: f64) -> f64 {
    let (a, b) = r.sums();
    (a + j * b).abs()
}

/// Discrete dual norm `j -> sqrt(r(j)ᵀ G⁻¹ r(j))` with one factorization of
/// `G` shared by every `j`.
#[derive(Clone, Debug)]
pub struct DualNorm {
    ws: Vec<f64>,
    wt: Vec<f64>,
}

impl DualNorm {
    /// `gram` is the factor of the `H^1` Gram matrix of the test functions.
    pub fn new(r: &ResidualAffine, gram: &Cholesky) -> Result<Self> {
        Ok(Self {
            ws: gram.forward(&r.s)?,
            wt: gram.forward(&r.t)?,
        })
    }

    pub fn eval(&self, j: f64) -> f64 {
        self.ws
            .iter()
            .zip(&self.wt)
            .fold(0.0, |acc, (s, t)| {
                let w = s + j * t;
                acc + w * w
            })
            .sqrt()
    }
}

/// `sqrt(r(j)ᵀ G⁻¹ r(j))` for the Gram matrix `gram` of the test functions.
pub fn objective_dual_norm(r: &ResidualAffine, gram: &crate::linalg::SymMatrix, j: f64) -> Result<f64> {
    Ok(norm2(&gram.cholesky()?.forward(&r.at(j))?))
}

/// Coercivity constant of `a_j` in the `H^1` norm: `a_j(v, v) >= min(1, j) ‖v‖²`.
pub fn coercivity(j: f64) -> f64 {
    j.min(1.0)
}

/// Upper bound on `‖y - x_j‖_{H^1}` from the residual of `y`, with the
/// residual norm measured on `span{g_3, ..., g_{n+2}}`.
pub fn collage_bound(
    y: &PiecewisePoly,
    spec: &ProblemSpec,
    n: usize,
    norm: Normalization,
) -> Result<f64> {
    check_parameter(spec.j)?;
    let r = residuals(y, &spec.f, n, norm)?;
    let ops = operators(n, norm)?;
    let dual = DualNorm::new(&r, ops.h1_gram_factor()?)?;
    Ok(dual.eval(spec.j) / coercivity(spec.j))
}

/// Dual norm of the residual of `y` for every `n` in `sizes`, reusing one
/// Gram factorization of the largest size.
pub fn dual_norm_profile(
    y: &PiecewisePoly,
    spec: &ProblemSpec,
    sizes: &[usize],
    norm: Normalization,
) -> Result<Vec<f64>> {
    let n_max = sizes.iter().copied().max().ok_or_else(|| domain("no sizes"))?;
    let r = residuals(y, &spec.f, n_max, norm)?;
    let ops = operators(n_max, norm)?;
    let factor = ops.h1_gram_factor()?;
    sizes
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(domain("test space dimension must be at least 1"));
            }
            Ok(DualNorm::new(&r.truncate(n), &factor.leading(n))?.eval(spec.j))
        })
        .collect()
}

/// Points in the coarse scan of [`minimize_scalar`].
pub const SCAN_POINTS: usize = 129;

/// Minimizes `obj` on `[lo, hi]`: a 129-point scan picks the best cell
/// (ties toward smaller `j`), then golden-section search narrows the
/// neighbouring cells to width `tol`.
pub fn minimize_scalar<F>(obj: F, lo: f64, hi: f64, tol: f64, exec: Execution) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(domain(format!("invalid search interval [{lo}, {hi}]")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain(format!("tolerance {tol} must be positive")));
    }
    let cells = SCAN_POINTS - 1;
    let grid = |i: usize| {
        if i == cells {
            hi
        } else {
            lo + (hi - lo) * i as f64 / cells as f64
        }
    };
    let values = exec.map_range(SCAN_POINTS, |i| obj(grid(i)));
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    let (j_grid, v_grid) = (grid(best), values[best]);

    let (mut a, mut b) = (grid(best.saturating_sub(1)), grid((best + 1).min(cells)));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (obj(c), obj(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = obj(d);
        }
    }
    let j = 0.5 * (a + b);
    let v = obj(j);
    if v_grid < v || (v_grid == v && j_grid < j) {
        Ok((j_grid, v_grid))
    } else {
        Ok((j, v))
    }
}

/// Exact minimizer of `|A + j B|` on `[lo, hi]`.
pub fn minimize_closed_form_abs_sum(r: &ResidualAffine, lo: f64, hi: f64) -> (f64, f64) {
    let (a, b) = r.sums();
    if b == 0.0 {
        return (lo, a.abs());
    }
    let j = (-a / b).clamp(lo, hi);
    (j, (a + j * b).abs())
}

/// Objective used for parameter recovery.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// `|sum_k r_k(j)|`.
    #[default]
    AbsSum,
    /// `sqrt(r(j)ᵀ G⁻¹ r(j))`.
    DualNorm,
}

impl ObjectiveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::AbsSum => "abs_sum",
            ObjectiveKind::DualNorm => "dual_norm",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "abs_sum" => Ok(ObjectiveKind::AbsSum),
            "dual_norm" => Ok(ObjectiveKind::DualNorm),
            other => Err(domain(format!("unknown objective `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InverseResult {
    pub j_star: f64,
    pub objective_value: f64,
    pub objective_kind: ObjectiveKind,
    pub n: usize,
    /// Resolution of the target, when it is a Galerkin approximant.
    pub m: Option<usize>,
    pub norm: Normalization,
    pub j_range: (f64, f64),
}

/// Search settings for [`recover_parameter`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recovery {
    pub n: usize,
    pub j_range: (f64, f64),
    pub objective: ObjectiveKind,
    pub norm: Normalization,
    /// Final bracket width for the golden-section path.
    pub tol: f64,
}

impl Recovery {
    pub fn new(n: usize, objective: ObjectiveKind, norm: Normalization) -> Self {
        Self {
            n,
            j_range: (1.0, 4.0),
            objective,
            norm,
            tol: 1e-10,
        }
    }
}

/// Finds the `j` in `settings.j_range` minimizing the chosen collage
/// objective for target `y` and forcing `f`.
pub fn recover_parameter(y: &PiecewisePoly, f: &PiecewisePoly, settings: &Recovery) -> Result<InverseResult> {
    let (lo, hi) = settings.j_range;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(domain(format!("invalid parameter range [{lo}, {hi}]")));
    }
    let r = residuals(y, f, settings.n, settings.norm)?;
    let (j_star, objective_value) = match settings.objective {
        ObjectiveKind::AbsSum => minimize_closed_form_abs_sum(&r, lo, hi),
        ObjectiveKind::DualNorm => {
            let ops = operators(settings.n, settings.norm)?;
            let dual = DualNorm::new(&r, ops.h1_gram_factor()?)?;
            minimize_scalar(|j| dual.eval(j), lo, hi, settings.tol, Execution::default())?
        }
    };
    Ok(InverseResult {
        j_star,
        objective_value,
        objective_kind: settings.objective,
        n: settings.n,
        m: None,
        norm: settings.norm,
        j_range: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galerkin::{reference, solve_direct};

    #[test]
    fn zero_target_zero_forcing() {
        let z = PiecewisePoly::zero();
        let r = residuals(&z, &z, 7, Normalization::Flat).unwrap();
        assert!(r.s.iter().chain(&r.t).all(|v| *v == 0.0));
        assert_eq!(objective_abs_sum(&r, 2.5), 0.0);
        let gram = operators(7, Normalization::Flat).unwrap().h1_gram();
        assert_eq!(objective_dual_norm(&r, &gram, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn exact_solution_has_zero_residual() {
        let spec = reference::spec();
        let r = residuals(&reference::exact(), &spec.f, 31, Normalization::Flat).unwrap();
        for v in r.at(spec.j) {
            assert!(v.abs() < 1e-13, "{v}");
        }
    }

    #[test]
    fn galerkin_target_is_orthogonal_on_its_space() {
        let spec = reference::spec();
        let sol = solve_direct(&spec, 15, Normalization::L2).unwrap();
        let r = residuals(&sol.solution, &spec.f, 15, Normalization::L2).unwrap();
        for v in r.at(spec.j) {
            assert!(v.abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn one_dimensional_dual_norm() {
        let r = ResidualAffine::new(vec![0.3], vec![-0.7]).unwrap();
        let gram = operators(1, Normalization::Flat).unwrap().h1_gram();
        let got = objective_dual_norm(&r, &gram, 1.5).unwrap();
        let want = (0.3 - 1.5 * 0.7f64).abs() / gram.get(0, 0).sqrt();
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn quadratic_minimum() {
        let (j, v) = minimize_scalar(|j| (j - 2.0).powi(2), 1.0, 4.0, 1e-8, Execution::Sequential).unwrap();
        assert!((j - 2.0).abs() <= 1e-8);
        assert!(v < 1e-15);
    }

    #[test]
    fn v_shape_minimum() {
        let (a, b) = (-3.3, 1.7);
        let (j, _) = minimize_scalar(|j| (a + j * b).abs(), 1.0, 4.0, 1e-9, Execution::Parallel).unwrap();
        assert!((j + a / b).abs() <= 1e-9);
    }

    #[test]
    fn minimizer_at_boundary() {
        let (j, _) = minimize_scalar(|j| j, 1.0, 4.0, 1e-9, Execution::Sequential).unwrap();
        assert_eq!(j, 1.0);
        let (j, _) = minimize_scalar(|j| -j, 1.0, 4.0, 1e-9, Execution::Sequential).unwrap();
        assert!((j - 4.0).abs() <= 1e-9);
    }

    #[test]
    fn constant_objective_prefers_smaller_j() {
        let (j, v) = minimize_scalar(|_| 3.0, 1.0, 4.0, 1e-9, Execution::Parallel).unwrap();
        assert_eq!((j, v), (1.0, 3.0));
    }

    #[test]
    fn minimize_scalar_rejects_bad_input() {
        assert!(minimize_scalar(|j| j, 4.0, 1.0, 1e-9, Execution::Sequential).is_err());
        assert!(minimize_scalar(|j| j, 1.0, 4.0, 0.0, Execution::Sequential).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let r = ResidualAffine::new(vec![-2f64.sqrt()], vec![1.0]).unwrap();
        assert_eq!(minimize_closed_form_abs_sum(&r, 1.0, 4.0).0, 2f64.sqrt());
        let r = ResidualAffine::new(vec![1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(minimize_closed_form_abs_sum(&r, 1.0, 4.0), (1.0, 3.0));
        let r = ResidualAffine::new(vec![10.0], vec![1.0]).unwrap();
        assert_eq!(minimize_closed_form_abs_sum(&r, 1.0, 4.0), (1.0, 11.0));
    }

    #[test]
    fn collage_bound_scales_with_coercivity() {
        // y = 0 makes the residual independent of j
        let f = PiecewisePoly::polynomial(&[1.0, -2.0, 0.5]).unwrap();
        let z = PiecewisePoly::zero();
        let b1 = collage_bound(&z, &ProblemSpec::new(0.0, 0.0, 0.5, f.clone()).unwrap(), 15, Normalization::Flat).unwrap();
        let b2 = collage_bound(&z, &ProblemSpec::new(0.0, 0.0, 0.25, f).unwrap(), 15, Normalization::Flat).unwrap();
        assert!((b2 - 2.0 * b1).abs() < 1e-14 * b2);
    }

    #[test]
    fn objective_names_round_trip() {
        for k in [ObjectiveKind::AbsSum, ObjectiveKind::DualNorm] {
            assert_eq!(k.as_str().parse::<ObjectiveKind>().unwrap(), k);
        }
        assert!("l1".parse::<ObjectiveKind>().is_err());
    }

    #[test]
    fn mismatched_residual_lengths() {
        assert!(ResidualAffine::new(vec![1.0], vec![]).is_err());
    }
}
