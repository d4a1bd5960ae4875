use nalgebra::DMatrix;
use rayon::prelude::*;

use super::SolverError;

/// Row count above which matrix-vector products run on the rayon pool.
const PAR_ROWS: usize = 4096;

/// Square sparse matrix in compressed-row form with a symmetric pattern.
///
/// Both triangles are stored. Column indices are sorted within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    /// Builds the matrix from `(row, col, value)` triplets. Duplicates are
    /// summed in input order, so the result is independent of thread timing.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self, SolverError> {
        if let Some(&(r, c, _)) = triplets.iter().find(|t| t.0 >= n || t.1 >= n) {
            return Err(SolverError::DimensionMismatch(format!(
                "entry ({r}, {c}) outside a {n}x{n} matrix"
            )));
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        let m = SparseSym {
            n,
            row_ptr,
            col_idx,
            values,
        };
        m.check_structure()?;
        Ok(m)
    }

    /// Zero-valued matrix with the given per-row column sets.
    pub fn from_pattern(rows: Vec<Vec<usize>>) -> Result<Self, SolverError> {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for mut cols in rows {
            cols.sort_unstable();
            cols.dedup();
            if cols.last().is_some_and(|&c| c >= n) {
                return Err(SolverError::DimensionMismatch("pattern column out of range".into()));
            }
            col_idx.extend(cols);
            row_ptr.push(col_idx.len());
        }
        let values = vec![0.0; col_idx.len()];
        let m = SparseSym {
            n,
            row_ptr,
            col_idx,
            values,
        };
        m.check_structure()?;
        Ok(m)
    }

    /// Nonzero entries of a dense matrix, plus their transposed positions.
    pub fn from_dense(a: &DMatrix<f64>) -> Result<Self, SolverError> {
        if a.nrows() != a.ncols() {
            return Err(SolverError::DimensionMismatch("matrix is not square".into()));
        }
        let n = a.nrows();
        let mut trip = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if a[(r, c)] != 0.0 || a[(c, r)] != 0.0 || r == c {
                    trip.push((r, c, a[(r, c)]));
                }
            }
        }
        Self::from_triplets(n, trip)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, (0..n).map(|i| (i, i, 1.0)).collect()).expect("identity is symmetric")
    }

    fn check_structure(&self) -> Result<(), SolverError> {
        for r in 0..self.n {
            for &c in self.row_cols(r) {
                if self.find(c, r).is_none() {
                    return Err(SolverError::NotSymmetric(format!(
                        "entry ({r}, {c}) has no transposed partner"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_cols(&self, r: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[r]..self.row_ptr[r + 1]]
    }

    pub fn row_values(&self, r: usize) -> &[f64] {
        &self.values[self.row_ptr[r]..self.row_ptr[r + 1]]
    }

    fn find(&self, r: usize, c: usize) -> Option<usize> {
        let start = self.row_ptr[r];
        self.row_cols(r).binary_search(&c).ok().map(|k| start + k)
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.find(r, c).map_or(0.0, |k| self.values[k])
    }

    /// Adds `v` to an existing entry; returns `false` if `(r, c)` is not in
    /// the pattern.
    pub fn add(&mut self, r: usize, c: usize, v: f64) -> bool {
        match self.find(r, c) {
            Some(k) => {
                self.values[k] += v;
                true
            }
            None => false,
        }
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: f64) -> bool {
        match self.find(r, c) {
            Some(k) => {
                self.values[k] = v;
                true
            }
            None => false,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let row = |r: usize| -> f64 {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            self.col_idx[lo..hi]
                .iter()
                .zip(&self.values[lo..hi])
                .map(|(&c, &v)| v * x[c])
                .sum()
        };
        if self.n >= PAR_ROWS {
            y.par_iter_mut().enumerate().for_each(|(r, yr)| *yr = row(r));
        } else {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = row(r);
            }
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |a_ij - a_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.n {
            for (&c, &v) in self.row_cols(r).iter().zip(self.row_values(r)) {
                worst = worst.max((v - self.get(c, r)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for r in 0..self.n {
            for (&c, &v) in self.row_cols(r).iter().zip(self.row_values(r)) {
                a[(r, c)] = v;
            }
        }
        a
    }

    /// Zeroes row and column `d` and puts `diag` on the diagonal.
    pub(crate) fn eliminate(&mut self, d: usize, diag: f64) {
        let (lo, hi) = (self.row_ptr[d], self.row_ptr[d + 1]);
        for k in lo..hi {
            let c = self.col_idx[k];
            self.values[k] = if c == d { diag } else { 0.0 };
            if c != d {
                self.set(c, d, 0.0);
            }
        }
    }
}
