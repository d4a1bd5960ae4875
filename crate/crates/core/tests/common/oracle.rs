//! Brute-force dense assembly and direct-solve exactness checks.

use std::sync::Arc;

use lsfem::assembly::{assemble_ls, BcMode, ProblemSpec, ScalarFn, VectorFn};
use lsfem::bench::error_norms;
use lsfem::mesh::Point;
use lsfem::solver::dense_oracle_solve;
use lsfem::{Discretization, Mesh};
use nalgebra::DMatrix;

use super::{poly_problem, segment_points, triangle_points, Poly};

/// Boundary side of the unit square containing segment `a`-`b`, as its outward
/// normal.
fn side_normal(a: Point, b: Point) -> Option<Point> {
    let on = |v: f64, c: f64| (v - c).abs() < 1e-14;
    if on(a[1], 0.0) && on(b[1], 0.0) {
        Some([0.0, -1.0])
    } else if on(a[0], 1.0) && on(b[0], 1.0) {
        Some([1.0, 0.0])
    } else if on(a[1], 1.0) && on(b[1], 1.0) {
        Some([0.0, 1.0])
    } else if on(a[0], 0.0) && on(b[0], 0.0) {
        Some([-1.0, 0.0])
    } else {
        None
    }
}

pub enum OracleKind {
    LeastSquares(Option<BcMode>),
    Transport,
}

/// Dense matrix and right-hand side from quadrature over every pair of global
/// basis functions, with no use of sparsity or symmetry.
pub fn oracle(problem: &ProblemSpec, disc: &Discretization, kind: OracleKind) -> (DMatrix<f64>, Vec<f64>) {
    let with_q = matches!(kind, OracleKind::LeastSquares(_));
    let nq = if with_q { disc.dofmap.n_q() } else { 0 };
    let n = nq + disc.dofmap.n_w();
    let eps = problem.epsilon;
    let se = eps.sqrt();
    let mut a = DMatrix::zeros(n, n);
    let mut rhs = vec![0.0; n];
    for t in 0..disc.mesh.num_triangles() {
        let verts = disc.mesh.triangle_vertices(t);
        let map = disc.map(t);
        for (x, w) in triangle_points(verts, 8) {
            let xh = map.to_reference(x);
            let beta = (problem.beta)(x);
            let c = (problem.reaction)(x);
            let f = (problem.source)(x);
            let mut r = vec![[0.0f64; 3]; n];
            if with_q {
                for (s, &d) in disc.q_basis(t, xh).iter().zip(disc.dofmap.q_dofs(t)) {
                    r[d] = [s.value[0], s.value[1], se * s.div];
                }
            }
            let (vals, grads) = disc.w_basis(t, xh);
            for ((v, g), &d) in vals.iter().zip(&grads).zip(disc.dofmap.w_dofs(t)) {
                r[nq + d] = [se * g[0], se * g[1], beta[0] * g[0] + beta[1] * g[1] + c * v];
            }
            for i in 0..n {
                for j in 0..n {
                    let v = if with_q {
                        r[i][0] * r[j][0] + r[i][1] * r[j][1] + r[i][2] * r[j][2]
                    } else {
                        r[i][2] * r[j][2]
                    };
                    a[(i, j)] += w * v;
                }
                rhs[i] += w * f * r[i][2];
            }
        }
        for e in 0..3 {
            let (pa, pb) = (verts[e], verts[(e + 1) % 3]);
            let Some(nrm) = side_normal(pa, pb) else {
                continue;
            };
            let h_f = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
            for (x, w) in segment_points(pa, pb, 8) {
                let b = (problem.beta)(x);
                let inflow = (-(b[0] * nrm[0] + b[1] * nrm[1])).max(0.0);
                let weight = match kind {
                    OracleKind::LeastSquares(Some(BcMode::Weak)) => (eps + inflow) / h_f,
                    OracleKind::LeastSquares(Some(BcMode::AltWeak)) => eps / h_f + inflow,
                    OracleKind::LeastSquares(_) => 0.0,
                    OracleKind::Transport => inflow / h_f,
                };
                let g = (problem.boundary)(x);
                let (vals, _) = disc.w_basis(t, map.to_reference(x));
                let mut phi = vec![0.0; n];
                for (v, &d) in vals.iter().zip(disc.dofmap.w_dofs(t)) {
                    phi[nq + d] = *v;
                }
                for i in 0..n {
                    for j in 0..n {
                        a[(i, j)] += w * weight * phi[i] * phi[j];
                    }
                    rhs[i] += w * weight * g * phi[i];
                }
            }
        }
    }
    (a, rhs)
}

/// `β = [1 + y, x/2 - 1]`, `c = 1 + x`: nonconstant coefficients of degree 1.
pub fn variable_problem(eps: f64) -> ProblemSpec {
    let poly = Poly::random(2, 11);
    let beta: VectorFn = Arc::new(|p| [1.0 + p[1], 0.5 * p[0] - 1.0]);
    let div: ScalarFn = Arc::new(|_| 0.0);
    let c: ScalarFn = Arc::new(|p| 1.0 + p[0]);
    ProblemSpec::manufactured("variable", eps, beta, div, c, poly.exact())
}

pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest entry difference relative to the largest oracle entry.
pub fn relative_mismatch(got: &DMatrix<f64>, want: &DMatrix<f64>) -> f64 {
    max_abs(&(got - want)) / max_abs(want)
}

/// Solves densely and reports the largest error norm together with the
/// relative asymmetry of the assembled matrix.
pub fn exactness_error(k: usize, mode: BcMode, eps: f64, beta: [f64; 2], c: f64, seed: u64, perturb: f64) -> (f64, f64) {
    let poly = Poly::random(k + 1, seed);
    let p = poly_problem(&poly, eps, beta, c);
    let mesh = Mesh::generate_structured(2, perturb).unwrap();
    let disc = Discretization::new(mesh, k, None).unwrap();
    let sys = assemble_ls(&p, &disc, mode).unwrap();
    let mut x = dense_oracle_solve(&sys.matrix.to_dense(), &sys.rhs).unwrap();
    for &(d, v) in &sys.dirichlet_eliminations {
        x[d] = v;
    }
    let w = x.split_off(sys.layout.n_q);
    let r = error_norms(&p, &disc, &x, &w, None).unwrap();
    let worst = [r.e_l2, r.e_grad, r.e_q.unwrap(), r.e_stream, r.e_bdry].into_iter().fold(0.0, f64::max);
    (worst, sys.relative_asymmetry())
}
