//! Zero fill-in incomplete Cholesky factorization.

use super::{SolverError, SparseSym};

/// Lower factor `L` with `L Lᵀ ≈ A + α diag(A)` on the lower pattern of `A`.
#[derive(Debug, Clone)]
pub struct IncompleteCholesky {
    row_ptr: Vec<usize>,
    /// Strictly lower columns, sorted; the diagonal is kept separately.
    col_idx: Vec<usize>,
    values: Vec<f64>,
    diag: Vec<f64>,
    shift: f64,
}

impl IncompleteCholesky {
    /// Factors `a`, increasing the diagonal shift until every pivot is
    /// positive.
    pub fn new(a: &SparseSym) -> Result<Self, SolverError> {
        let d = a.diagonal();
        if let Some(i) = d.iter().position(|&v| v <= 0.0) {
            return Err(SolverError::NotPositiveDefinite {
                iteration: 0,
                curvature: d[i],
            });
        }
        let mut shift = 0.0;
        loop {
            if let Some(f) = Self::try_factor(a, shift) {
                if shift > 0.0 {
                    log::debug!("incomplete Cholesky needed diagonal shift {shift:e}");
                }
                return Ok(f);
            }
            shift = if shift == 0.0 { 1e-4 } else { shift * 4.0 };
            if shift > 1.0 {
                return Err(SolverError::NotPositiveDefinite {
                    iteration: 0,
                    curvature: f64::NAN,
                });
            }
        }
    }

    fn try_factor(a: &SparseSym, shift: f64) -> Option<Self> {
        let n = a.dim();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut diag = vec![0.0; n];
        // Scatter map from column to position in the current row.
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            let start = col_idx.len();
            for (&c, &v) in a.row_cols(i).iter().zip(a.row_values(i)) {
                if c < i {
                    pos[c] = col_idx.len();
                    col_idx.push(c);
                    values.push(v);
                }
            }
            let end = col_idx.len();
            for p in start..end {
                let k = col_idx[p];
                // L[i,k] -= sum_j L[i,j] L[k,j] over j < k in both patterns.
                let mut s = values[p];
                for q in row_ptr[k]..row_ptr[k + 1] {
                    let j = col_idx[q];
                    let pj = pos[j];
                    if pj != usize::MAX && pj < p {
                        s -= values[pj] * values[q];
                    }
                }
                values[p] = s / diag[k];
            }
            let mut piv = a.get(i, i) * (1.0 + shift);
            for p in start..end {
                piv -= values[p] * values[p];
                pos[col_idx[p]] = usize::MAX;
            }
            if !(piv > 0.0) || !piv.is_finite() {
                return None;
            }
            diag[i] = piv.sqrt();
            row_ptr.push(end);
        }
        Some(IncompleteCholesky {
            row_ptr,
            col_idx,
            values,
            diag,
            shift,
        })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `z = (L Lᵀ)^{-1} r`.
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n {
            let mut s = r[i];
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s -= self.values[p] * z[self.col_idx[p]];
            }
            z[i] = s / self.diag[i];
        }
        for i in (0..n).rev() {
            z[i] /= self.diag[i];
            let zi = z[i];
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                z[self.col_idx[p]] -= self.values[p] * zi;
            }
        }
    }
}
