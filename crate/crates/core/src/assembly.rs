//! Galerkin assembly of `a_j(u, v) = ∫ u'v' + j ∫ uv` and `x*(v) = ∫ f v`
//! over `H_m = span{g_3, ..., g_{m+2}}`.
//!
//! The form is affine in the parameter: `A(j) = S + j M`. `S` and `M` are
//! assembled once per `(m, normalization)` and cached.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::basis::{h10_basis, h10_index, Normalization};
use crate::error::{domain, Result};
use crate::linalg::{Cholesky, SymMatrix};
use crate::par::Execution;
use crate::pwpoly::{h1semi_inner, l2_inner, PiecewisePoly};

/// Data of `-u'' + j u = f` on `(0, 1)`, `u(0) = alpha`, `u(1) = beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub beta: f64,
    pub j: f64,
    pub f: PiecewisePoly,
}

impl ProblemSpec {
    pub fn new(alpha: f64, beta: f64, j: f64, f: PiecewisePoly) -> Result<Self> {
        check_parameter(j)?;
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(domain("boundary values must be finite"));
        }
        Ok(Self { alpha, beta, j, f })
    }

    /// Same data with another parameter value.
    pub fn with_j(&self, j: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, j, self.f.clone())
    }

    /// Affine lift `u0(x) = alpha + (beta - alpha) x` carrying the
    /// boundary data.
    pub fn lift(&self) -> PiecewisePoly {
        PiecewisePoly::polynomial(&[self.alpha, self.beta - self.alpha])
            .expect("linear polynomial is representable")
    }
}

pub(crate) fn check_parameter(j: f64) -> Result<()> {
    if j > 0.0 && j.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("parameter j = {j} must be positive")))
    }
}

/// Stiffness and mass matrices of one basis.
#[derive(Clone, Debug)]
pub struct Operators {
    pub stiffness: SymMatrix,
    pub mass: SymMatrix,
    gram_factor: OnceLock<Cholesky>,
}

impl Operators {
    pub fn dim(&self) -> usize {
        self.stiffness.dim()
    }

    /// `S + j M`.
    pub fn system(&self, j: f64) -> Result<SymMatrix> {
        check_parameter(j)?;
        self.stiffness.add_scaled(j, &self.mass)
    }

    /// `H^1` Gram matrix `S + M`.
    pub fn h1_gram(&self) -> SymMatrix {
        self.stiffness
            .add_scaled(1.0, &self.mass)
            .expect("same dimension")
    }

    /// Cholesky factor of [`Operators::h1_gram`], computed on first use.
    pub fn h1_gram_factor(&self) -> Result<&Cholesky> {
        if let Some(c) = self.gram_factor.get() {
            return Ok(c);
        }
        let c = self.h1_gram().cholesky()?;
        Ok(self.gram_factor.get_or_init(|| c))
    }

    fn leading(&self, m: usize) -> Operators {
        let gram_factor = OnceLock::new();
        if let Some(c) = self.gram_factor.get() {
            let _ = gram_factor.set(c.leading(m));
        }
        Operators {
            stiffness: self.stiffness.leading(m),
            mass: self.mass.leading(m),
            gram_factor,
        }
    }
}

/// Assembles `{ (i, k) -> form(g_{i+3}, g_{k+3}) }` over overlapping
/// supports; disjoint pairs are exactly zero.
fn assemble<F>(m: usize, norm: Normalization, exec: Execution, form: F) -> Result<SymMatrix>
where
    F: Fn(&PiecewisePoly, &PiecewisePoly) -> Result<f64> + Sync + Send,
{
    let basis = h10_basis(m, norm)?;
    let rows = exec.try_map_range(m, |i| {
        let hi = h10_index(i);
        (i..m)
            .map(|k| {
                if hi.overlaps(&h10_index(k)) {
                    form(&basis[i], &basis[k])
                } else {
                    Ok(0.0)
                }
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(SymMatrix::from_upper_fn(m, |i, k| rows[i][k - i]))
}

/// `S_ik = ∫ g'_{i+3} g'_{k+3}`.
pub fn stiffness(m: usize, norm: Normalization) -> Result<SymMatrix> {
    assemble(m, norm, Execution::default(), h1semi_inner)
}

/// `M_ik = ∫ g_{i+3} g_{k+3}`.
pub fn mass(m: usize, norm: Normalization) -> Result<SymMatrix> {
    assemble(m, norm, Execution::default(), l2_inner)
}

/// Assembles both operators without touching the cache.
pub fn assemble_operators(m: usize, norm: Normalization, exec: Execution) -> Result<Operators> {
    Ok(Operators {
        stiffness: assemble(m, norm, exec, h1semi_inner)?,
        mass: assemble(m, norm, exec, l2_inner)?,
        gram_factor: OnceLock::new(),
    })
}

type Cache = RwLock<HashMap<(usize, Normalization), Arc<Operators>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached `(S, M)` for `(m, norm)`. A cached larger basis is reused via its
/// leading block, which is bitwise identical to a fresh assembly.
pub fn operators(m: usize, norm: Normalization) -> Result<Arc<Operators>> {
    if m == 0 {
        return Err(domain("basis dimension must be at least 1"));
    }
    {
        let map = cache().read().unwrap_or_else(|e| e.into_inner());
        if let Some(ops) = map.get(&(m, norm)) {
            return Ok(ops.clone());
        }
        if let Some(big) = map
            .iter()
            .filter(|((size, n), _)| *n == norm && *size > m)
            .min_by_key(|((size, _), _)| *size)
            .map(|(_, ops)| ops.clone())
        {
            drop(map);
            let ops = Arc::new(big.leading(m));
            return Ok(insert(m, norm, ops));
        }
    }
    // Concurrent first fills compute the same matrices; first insert wins.
    let ops = Arc::new(assemble_operators(m, norm, Execution::default())?);
    Ok(insert(m, norm, ops))
}

fn insert(m: usize, norm: Normalization, ops: Arc<Operators>) -> Arc<Operators> {
    let mut map = cache().write().unwrap_or_else(|e| e.into_inner());
    map.entry((m, norm)).or_insert(ops).clone()
}

/// `S + j M`, positive definite for `j > 0`.
pub fn system(m: usize, j: f64, norm: Normalization) -> Result<SymMatrix> {
    check_parameter(j)?;
    operators(m, norm)?.system(j)
}

/// `∫ g'_{i+3}` for each basis function; zero for mean-free Haar
/// derivatives, but computed for any basis.
pub fn derivative_means(m: usize, norm: Normalization) -> Result<Vec<f64>> {
    Ok(h10_basis(m, norm)?
        .iter()
        .map(|g| g.derivative().integrate())
        .collect())
}

/// Homogenized load `b_i = ∫ f g - (beta - alpha) ∫ g' - j ∫ u0 g` with
/// `g = g_{i+3}`.
pub fn load(spec: &ProblemSpec, m: usize, norm: Normalization) -> Result<Vec<f64>> {
    let basis = h10_basis(m, norm)?;
    let lift = spec.lift();
    let slope = spec.beta - spec.alpha;
    Execution::default().try_map_range(m, |i| {
        let g = &basis[i];
        let forcing = l2_inner(&spec.f, g)?;
        let lift_mass = l2_inner(&lift, g)?;
        let lift_stiff = g.derivative().integrate();
        Ok(forcing - slope * lift_stiff - spec.j * lift_mass)
    })
}

/// `diag(2^(n_i / 2))`: entries mapping flat to `L^2` normalization.
pub fn normalization_scaling(m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| Normalization::L2.amplitude(h10_index(i).level))
        .collect()
}
