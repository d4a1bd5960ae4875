use super::direct::SparseCholesky;
use super::ichol::IncompleteCholesky;
use super::{dot, norm, SolverError, SparseSym};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Jacobi,
    /// Zero fill-in incomplete Cholesky, diagonally shifted on breakdown.
    IncompleteCholesky,
    /// Complete sparse Cholesky factor; CG then only polishes the residual.
    Cholesky,
}

impl std::str::FromStr for Preconditioner {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Preconditioner::None),
            "jacobi" => Ok(Preconditioner::Jacobi),
            "ic" => Ok(Preconditioner::IncompleteCholesky),
            "cholesky" => Ok(Preconditioner::Cholesky),
            _ => Err(format!("unknown preconditioner '{s}' (none, jacobi, ic, cholesky)")),
        }
    }
}

enum Applied {
    Identity,
    Diagonal(Vec<f64>),
    Incomplete(IncompleteCholesky),
    Exact(SparseCholesky),
}

#[derive(Debug, Clone, Copy)]
pub struct CgOptions {
    /// Relative residual target `‖b - Ax‖ <= tol ‖b‖`.
    pub tol: f64,
    /// Defaults to `20 n`.
    pub max_iter: Option<usize>,
    pub precond: Preconditioner,
}

impl Default for CgOptions {
    fn default() -> Self {
        CgOptions {
            tol: 1e-10,
            max_iter: None,
            precond: Preconditioner::Jacobi,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual, recomputed from `b - Ax`.
    pub residual: f64,
    /// Relative recurrence residual per iteration, starting with the initial one.
    pub residual_history: Vec<f64>,
    /// Energy `½ xᵀAx - bᵀx` per iterate; nonincreasing for SPD `A`.
    pub energy_history: Vec<f64>,
}

/// Preconditioned conjugate gradients from a zero initial guess.
pub fn cg_solve(a: &SparseSym, b: &[f64], opts: &CgOptions) -> Result<CgSolution, SolverError> {
    let n = a.dim();
    if b.len() != n {
        return Err(SolverError::DimensionMismatch(format!(
            "right-hand side has length {}, matrix dimension {n}",
            b.len()
        )));
    }
    let max_iter = opts.max_iter.unwrap_or(20 * n.max(1));
    let precond = match opts.precond {
        Preconditioner::None => Applied::Identity,
        Preconditioner::Jacobi => {
            let d = a.diagonal();
            if let Some(i) = d.iter().position(|&v| v <= 0.0) {
                return Err(SolverError::NotPositiveDefinite {
                    iteration: 0,
                    curvature: d[i],
                });
            }
            Applied::Diagonal(d.iter().map(|v| 1.0 / v).collect())
        }
        Preconditioner::IncompleteCholesky => Applied::Incomplete(IncompleteCholesky::new(a)?),
        Preconditioner::Cholesky => Applied::Exact(SparseCholesky::new(a)?),
    };
    let apply_precond = |r: &[f64], z: &mut [f64]| match &precond {
        Applied::Diagonal(inv) => z.iter_mut().zip(r).zip(inv).for_each(|((zi, ri), di)| *zi = ri * di),
        Applied::Incomplete(f) => f.apply(r, z),
        Applied::Exact(f) => f.apply(r, z),
        Applied::Identity => z.copy_from_slice(r),
    };

    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(CgSolution {
            x,
            iterations: 0,
            residual: 0.0,
            residual_history: vec![0.0],
            energy_history: vec![0.0],
        });
    }
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    apply_precond(&r, &mut z);
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut history = vec![1.0];
    let mut energy = vec![0.0];
    let mut best = 1.0f64;
    let mut iterations = 0;
    let mut restarts = 0;

    loop {
        let rel = norm(&r) / bnorm;
        if rel <= opts.tol {
            // Guard against drift between the recurrence and true residual.
            let ax = a.mul(&x);
            let true_r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            let true_rel = norm(&true_r) / bnorm;
            if true_rel <= opts.tol || restarts >= 3 {
                if true_rel > opts.tol {
                    return Err(SolverError::NotConverged {
                        iterations,
                        residual: true_rel,
                    });
                }
                return Ok(CgSolution {
                    x,
                    iterations,
                    residual: true_rel,
                    residual_history: history,
                    energy_history: energy,
                });
            }
            restarts += 1;
            r = true_r;
            apply_precond(&r, &mut z);
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
        }
        if iterations >= max_iter {
            return Err(SolverError::NotConverged {
                iterations,
                residual: best,
            });
        }
        a.matvec(&p, &mut ap);
        let curvature = dot(&p, &ap);
        if curvature <= 0.0 || !curvature.is_finite() {
            return Err(SolverError::NotPositiveDefinite {
                iteration: iterations,
                curvature,
            });
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        apply_precond(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        iterations += 1;
        let rel = norm(&r) / bnorm;
        best = best.min(rel);
        history.push(rel);
        // ½ xᵀAx - bᵀx = -½ (xᵀb + xᵀr) with r = b - Ax.
        energy.push(-0.5 * (dot(&x, b) + dot(&x, &r)));
    }
}
