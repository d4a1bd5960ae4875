//! Extreme eigenvalues of SPD matrices.
//!
//! Small systems use a dense symmetric eigensolver. Larger ones run Lanczos
//! with full reorthogonalization twice: on `A` for `λ_max`, and on `A^{-1}`
//! (applied through a sparse Cholesky factor) for `λ_min`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dot, norm, SolverError, SparseCholesky, SparseSym};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMethod {
    Dense,
    Iterative,
}

impl std::fmt::Display for SpectralMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpectralMethod::Dense => "dense",
            SpectralMethod::Iterative => "iterative",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralOptions {
    /// `None` picks dense up to `dense_limit` and iterative above.
    pub method: Option<SpectralMethod>,
    pub dense_limit: usize,
    /// Relative accuracy target of each iterative extreme eigenvalue.
    pub tol: f64,
    pub max_steps: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            method: None,
            dense_limit: 2000,
            tol: 1e-4,
            max_steps: 300,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub kappa: f64,
    pub method: SpectralMethod,
    /// Relative residual bounds reached for `λ_min` and `λ_max`; zero for
    /// the dense path.
    pub min_accuracy: f64,
    pub max_accuracy: f64,
}

pub fn estimate_extremes(a: &SparseSym, opts: &SpectralOptions) -> Result<SpectralEstimate, SolverError> {
    let n = a.dim();
    if n == 0 {
        return Err(SolverError::DimensionMismatch("empty matrix".into()));
    }
    let method = opts.method.unwrap_or(if n <= opts.dense_limit {
        SpectralMethod::Dense
    } else {
        SpectralMethod::Iterative
    });
    match method {
        SpectralMethod::Dense => dense_extremes(&a.to_dense()),
        SpectralMethod::Iterative => iterative_extremes(a, opts),
    }
}

/// Extreme eigenvalues by a full symmetric eigendecomposition.
pub fn dense_extremes(a: &DMatrix<f64>) -> Result<SpectralEstimate, SolverError> {
    let eig = SymmetricEigen::new(a.clone());
    let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo <= 0.0 {
        return Err(SolverError::NotPositiveDefinite {
            iteration: 0,
            curvature: lo,
        });
    }
    Ok(SpectralEstimate {
        lambda_min: lo,
        lambda_max: hi,
        kappa: hi / lo,
        method: SpectralMethod::Dense,
        min_accuracy: 0.0,
        max_accuracy: 0.0,
    })
}

fn iterative_extremes(a: &SparseSym, opts: &SpectralOptions) -> Result<SpectralEstimate, SolverError> {
    let n = a.dim();
    let max = lanczos_largest(
        n,
        |v, out| {
            a.matvec(v, out);
            Ok(())
        },
        opts.tol,
        opts.max_steps,
        1,
    );
    let factor = SparseCholesky::new(a)?;
    let min = lanczos_largest(
        n,
        |v, out| {
            factor.apply(v, out);
            Ok(())
        },
        opts.tol,
        opts.max_steps,
        2,
    );
    let (max, min) = (max?, min?);
    let lambda_max = max.value;
    let lambda_min = 1.0 / min.value;
    let est = SpectralEstimate {
        lambda_min,
        lambda_max,
        kappa: lambda_max / lambda_min,
        method: SpectralMethod::Iterative,
        min_accuracy: min.accuracy,
        max_accuracy: max.accuracy,
    };
    if !(min.converged && max.converged) {
        return Err(SolverError::SpectralIncomplete(Box::new(est)));
    }
    Ok(est)
}

struct RitzResult {
    value: f64,
    accuracy: f64,
    converged: bool,
}

/// Largest eigenvalue of a symmetric positive operator by Lanczos with full
/// reorthogonalization.
fn lanczos_largest(
    n: usize,
    mut apply: impl FnMut(&[f64], &mut [f64]) -> Result<(), SolverError>,
    tol: f64,
    max_steps: usize,
    seed: u64,
) -> Result<RitzResult, SolverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c41_4e43_5a4f_5300 ^ seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.5).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let steps = max_steps.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut last = RitzResult {
        value: 0.0,
        accuracy: f64::INFINITY,
        converged: false,
    };
    for j in 0..steps {
        apply(&v, &mut w)?;
        let aj = dot(&w, &v);
        alpha.push(aj);
        basis.push(v.clone());
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
        let bj = norm(&w);
        let dim = j + 1;
        let check = dim <= 40 || dim % 5 == 0 || dim == steps || bj <= 1e-14 * aj.abs();
        if check {
            let mut t = DMatrix::zeros(dim, dim);
            for i in 0..dim {
                t[(i, i)] = alpha[i];
                if i + 1 < dim {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (idx, &theta) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.total_cmp(y.1))
                .unwrap();
            let s_last = eig.eigenvectors[(dim - 1, idx)];
            let accuracy = (bj * s_last).abs() / theta.abs();
            last = RitzResult {
                value: theta,
                accuracy,
                converged: accuracy <= tol || bj <= 1e-14 * theta.abs(),
            };
            if last.converged {
                return Ok(last);
            }
        }
        if bj == 0.0 {
            break;
        }
        beta.push(bj);
        v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / bj);
    }
    Ok(last)
}
