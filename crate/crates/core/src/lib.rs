//! Faber-Schauder Galerkin solver and collage-based parameter recovery for
//! `-u'' + j u = f` on `(0, 1)` with Dirichlet data.
//!
//! All integrals are exact: functions are piecewise polynomials on dyadic
//! grids ([`pwpoly`]). The hierarchical hat basis ([`basis`]) yields the
//! stiffness and mass matrices of [`assembly`], the direct solver and error
//! norms live in [`galerkin`], and [`inverse`] recovers `j` from a target
//! by minimizing the residual of the variational equation.

pub mod assembly;
pub mod basis;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod galerkin;
pub mod inverse;
pub mod linalg;
pub mod par;
pub mod pwpoly;

pub use assembly::{ProblemSpec, Operators};
pub use basis::{HaarIndex, Normalization};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use galerkin::{ErrorNorms, GalerkinSolution};
pub use inverse::{InverseResult, ObjectiveKind, ResidualAffine};
pub use linalg::{Cholesky, SymMatrix};
pub use par::Execution;
pub use pwpoly::PiecewisePoly;
