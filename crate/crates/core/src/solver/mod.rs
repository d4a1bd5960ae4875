//! Sparse symmetric storage, preconditioned conjugate gradients, and
//! extreme-eigenvalue estimation.

mod cg;
mod direct;
mod ichol;
mod sparse;
mod spectral;

use nalgebra::DMatrix;
use thiserror::Error;

pub use direct::SparseCholesky;
pub use ichol::IncompleteCholesky;
pub use cg::{cg_solve, CgOptions, CgSolution, Preconditioner};
pub use sparse::SparseSym;
pub use spectral::{dense_extremes, estimate_extremes, SpectralEstimate, SpectralMethod, SpectralOptions};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("conjugate gradients did not converge in {iterations} iterations (best relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("matrix is not positive definite: curvature {curvature:e} at iteration {iteration}")]
    NotPositiveDefinite { iteration: usize, curvature: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigenvalue iteration did not reach the requested accuracy (partial: λ_min={:e} ±{:e}, λ_max={:e} ±{:e})",
        .0.lambda_min, .0.min_accuracy, .0.lambda_max, .0.max_accuracy)]
    SpectralIncomplete(Box<SpectralEstimate>),
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Direct LU solve; the cross-check for iterative results on small systems.
pub fn dense_oracle_solve(a: &DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>, SolverError> {
    if a.nrows() != a.ncols() || a.nrows() != b.len() {
        return Err(SolverError::DimensionMismatch(format!(
            "{}x{} matrix with right-hand side of length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let rhs = nalgebra::DVector::from_column_slice(b);
    let x = a.clone().lu().solve(&rhs).ok_or(SolverError::Singular)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::Singular);
    }
    Ok(x.iter().copied().collect())
}
