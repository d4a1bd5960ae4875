//! Sparse Cholesky factorization with a fill-reducing ordering.

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Llt;
use faer::sparse::{SparseColMat, Triplet};
use faer::{MatMut, Side};

use super::{SolverError, SparseSym};

pub struct SparseCholesky {
    llt: Llt<usize, f64>,
    dim: usize,
}

impl std::fmt::Debug for SparseCholesky {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SparseCholesky").field("dim", &self.dim).finish()
    }
}

impl SparseCholesky {
    pub fn new(a: &SparseSym) -> Result<Self, SolverError> {
        let n = a.dim();
        let mut trip = Vec::with_capacity(a.nnz() / 2 + n);
        for r in 0..n {
            for (&c, &v) in a.row_cols(r).iter().zip(a.row_values(r)) {
                if c <= r {
                    trip.push(Triplet::new(r, c, v));
                }
            }
        }
        let lower = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
            .map_err(|e| SolverError::DimensionMismatch(format!("{e:?}")))?;
        let llt = lower.sp_cholesky(Side::Lower).map_err(|_| SolverError::NotPositiveDefinite {
            iteration: 0,
            curvature: f64::NAN,
        })?;
        Ok(SparseCholesky { llt, dim: n })
    }

    /// `z = A^{-1} r`.
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
        let col = MatMut::from_column_major_slice_mut(z, self.dim, 1);
        self.llt.solve_in_place(col);
    }
}
