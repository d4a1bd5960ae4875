//! Least-squares system assembly.
//!
//! For `(q, u)` and test pair `(p, w)` the residual map is
//! `T(p, w) = (p + ε^{1/2}∇w, ε^{1/2}∇·p + β·∇w + c w, w|_∂Ω)`
//! and the matrix is `(T φ_i, T φ_j)` in the product inner product, whose
//! boundary part carries the face weight selected by [`BcMode`].

mod problem;

use rayon::prelude::*;
use thiserror::Error;

use crate::fem::{assembly_degree, edge_rule, rt::local_edge_vertices, triangle_rule, Discretization, FemError};
use crate::mesh::Point;
use crate::solver::{SolverError, SparseSym};

pub use problem::{ExactSolution, ProblemSpec, ScalarFn, SlitData, VectorFn};

/// Elements per parallel batch; bounds memory held in local matrices.
const BATCH: usize = 2048;

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("diffusion coefficient must be positive for the least-squares system (got {0}); use transport assembly for ε = 0")]
    EpsilonNotPositive(f64),
    #[error("transport assembly requires ε = 0 (got {0})")]
    EpsilonNotZero(f64),
    #[error("degree-of-freedom map was built for a different mesh")]
    DofMapMismatch,
    #[error("problem '{0}' prescribes slit data but the mesh topology has no slit edges")]
    SlitMissing(String),
    #[error("slit data must be applied before boundary elimination")]
    AlreadyEliminated,
    #[error("slit edge {0} couples degrees of freedom outside the matrix pattern")]
    Pattern(usize),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// How the Dirichlet condition enters the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcMode {
    /// Face weight `h_F^{-1} (ε + max(-β·n, 0))`.
    Weak,
    /// Boundary Lagrange DOFs fixed to nodal values of `g`.
    Strong,
    /// Face weight `h_F^{-1} ε + max(-β·n, 0)`.
    AltWeak,
}

impl BcMode {
    pub fn label(&self) -> &'static str {
        match self {
            BcMode::Weak => "weak",
            BcMode::Strong => "strong",
            BcMode::AltWeak => "alt-weak",
        }
    }
}

impl std::str::FromStr for BcMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weak" => Ok(BcMode::Weak),
            "strong" => Ok(BcMode::Strong),
            "alt-weak" => Ok(BcMode::AltWeak),
            _ => Err(format!("unknown boundary mode '{s}' (weak, strong, alt-weak)")),
        }
    }
}

impl std::fmt::Display for BcMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Block sizes; the `W_h` block starts at `n_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n_q: usize,
    pub n_w: usize,
}

impl Layout {
    pub fn total(&self) -> usize {
        self.n_q + self.n_w
    }
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: SparseSym,
    pub rhs: Vec<f64>,
    /// `(global index, value)` of eliminated boundary DOFs (strong mode).
    pub dirichlet_eliminations: Vec<(usize, f64)>,
    pub layout: Layout,
}

impl LinearSystem {
    /// `‖A - Aᵀ‖_max / ‖A‖_max`.
    pub fn relative_asymmetry(&self) -> f64 {
        let m = self.matrix.max_abs();
        if m == 0.0 {
            0.0
        } else {
            self.matrix.symmetry_defect() / m
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    LeastSquares(BcMode),
    Transport,
}

/// Assembles the least-squares system for `ε > 0` in the given mode.
///
/// Slit data carried by the problem is added before strong-mode elimination.
pub fn assemble_ls(problem: &ProblemSpec, disc: &Discretization, mode: BcMode) -> Result<LinearSystem, AssemblyError> {
    if !(problem.epsilon > 0.0) {
        return Err(AssemblyError::EpsilonNotPositive(problem.epsilon));
    }
    let mut sys = assemble_raw(problem, disc, Kind::LeastSquares(mode))?;
    if let Some(slit) = &problem.slit {
        if disc.topology.slit_normal().is_none() {
            return Err(AssemblyError::SlitMissing(problem.name.clone()));
        }
        apply_slit(&mut sys, disc, problem, &*slit.value)?;
    }
    if mode == BcMode::Strong {
        eliminate_boundary(&mut sys, disc, &*problem.boundary);
    }
    Ok(sys)
}

/// Assembles the `W_h`-only system for `β·∇u + c u = f` with inflow data.
pub fn assemble_transport(problem: &ProblemSpec, disc: &Discretization) -> Result<LinearSystem, AssemblyError> {
    if problem.epsilon != 0.0 {
        return Err(AssemblyError::EpsilonNotZero(problem.epsilon));
    }
    let mut sys = assemble_raw(problem, disc, Kind::Transport)?;
    if let Some(slit) = &problem.slit {
        if disc.topology.slit_normal().is_none() {
            return Err(AssemblyError::SlitMissing(problem.name.clone()));
        }
        apply_slit(&mut sys, disc, problem, &*slit.value)?;
    }
    Ok(sys)
}

/// Reference tables shared by all elements.
struct Tables {
    weights: Vec<f64>,
    points: Vec<[f64; 2]>,
    w_val: Vec<Vec<f64>>,
    w_grad: Vec<Vec<[f64; 2]>>,
    q_val: Vec<Vec<[f64; 2]>>,
    q_div: Vec<Vec<f64>>,
    edge_t: Vec<f64>,
    edge_w: Vec<f64>,
    /// `[local edge][edge point][basis]`.
    w_edge: Vec<Vec<Vec<f64>>>,
}

impl Tables {
    fn new(disc: &Discretization, with_q: bool) -> Result<Self, FemError> {
        let deg = assembly_degree(disc.k());
        let rule = triangle_rule(deg)?;
        let lag = disc.lagrange.tabulate(&rule.points);
        let (q_val, q_div) = if with_q {
            let tab = disc.rt.tabulate(&rule.points);
            (
                tab.samples.iter().map(|row| row.iter().map(|s| s.value).collect()).collect(),
                tab.samples.iter().map(|row| row.iter().map(|s| s.div).collect()).collect(),
            )
        } else {
            (Vec::new(), Vec::new())
        };
        let erule = edge_rule(deg)?;
        let w_edge = (0..3)
            .map(|i| {
                let (a, b) = local_edge_vertices(i);
                let pts: Vec<[f64; 2]> = erule
                    .points
                    .iter()
                    .map(|q| [a[0] + q[0] * (b[0] - a[0]), a[1] + q[0] * (b[1] - a[1])])
                    .collect();
                disc.lagrange.tabulate(&pts).values
            })
            .collect();
        Ok(Tables {
            weights: rule.weights,
            points: rule.points,
            w_val: lag.values,
            w_grad: lag.grads,
            q_val,
            q_div,
            edge_t: erule.points.iter().map(|p| p[0]).collect(),
            edge_w: erule.weights,
            w_edge,
        })
    }
}

struct Local {
    dofs: Vec<usize>,
    mat: Vec<f64>,
    rhs: Vec<f64>,
}

fn element_dofs(disc: &Discretization, t: usize, kind: Kind) -> Vec<usize> {
    let dm = &disc.dofmap;
    match kind {
        Kind::LeastSquares(_) => dm
            .q_dofs(t)
            .iter()
            .copied()
            .chain(dm.w_dofs(t).iter().map(|&d| d + dm.n_q()))
            .collect(),
        Kind::Transport => dm.w_dofs(t).to_vec(),
    }
}

fn local_system(problem: &ProblemSpec, disc: &Discretization, tab: &Tables, t: usize, kind: Kind) -> Local {
    let dm = &disc.dofmap;
    let with_q = matches!(kind, Kind::LeastSquares(_));
    let nq = if with_q { dm.nq_local() } else { 0 };
    let nw = dm.nw_local();
    let n = nq + nw;
    let eps = problem.epsilon;
    let se = eps.sqrt();
    let map = disc.map(t);
    let det = map.det();
    let factors = dm.q_factors(t);
    let mut mat = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    // Residual components of each local basis function at one point.
    let mut res = vec![[0.0f64; 3]; n];

    for (qp, (&xh, &wq)) in tab.points.iter().zip(&tab.weights).enumerate() {
        let x = map.to_physical(xh);
        let w = wq * det;
        let beta = (problem.beta)(x);
        let c = (problem.reaction)(x);
        let f = (problem.source)(x);
        for i in 0..nq {
            let v = map.piola(tab.q_val[qp][i]);
            let fac = factors[i];
            res[i] = [fac * v[0], fac * v[1], se * fac * tab.q_div[qp][i] / det];
        }
        for i in 0..nw {
            let g = map.grad(tab.w_grad[qp][i]);
            let phi = tab.w_val[qp][i];
            res[nq + i] = [se * g[0], se * g[1], beta[0] * g[0] + beta[1] * g[1] + c * phi];
        }
        for i in 0..n {
            let ri = res[i];
            for j in i..n {
                let rj = res[j];
                let v = if with_q {
                    ri[0] * rj[0] + ri[1] * rj[1] + ri[2] * rj[2]
                } else {
                    ri[2] * rj[2]
                };
                mat[i * n + j] += w * v;
            }
            rhs[i] += w * f * ri[2];
        }
    }

    let weight_fn = |beta_n: f64, h_f: f64| -> f64 {
        let inflow = (-beta_n).max(0.0);
        match kind {
            Kind::LeastSquares(BcMode::Weak) => (eps + inflow) / h_f,
            Kind::LeastSquares(BcMode::AltWeak) => eps / h_f + inflow,
            Kind::LeastSquares(BcMode::Strong) => 0.0,
            Kind::Transport => inflow / h_f,
        }
    };
    if kind != Kind::LeastSquares(BcMode::Strong) {
        let edges = disc.topology.triangle_edges(t);
        let verts = disc.mesh.triangle_vertices(t);
        for (i, &e) in edges.iter().enumerate() {
            let Some(normal) = disc.topology.outward_normal(e) else {
                continue;
            };
            let h_f = disc.topology.h_f(e);
            let a = verts[(i + 1) % 3];
            let b = verts[(i + 2) % 3];
            for (ep, (&s, &ws)) in tab.edge_t.iter().zip(&tab.edge_w).enumerate() {
                let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                let beta = (problem.beta)(x);
                let wt = weight_fn(beta[0] * normal[0] + beta[1] * normal[1], h_f) * ws * h_f;
                if wt == 0.0 {
                    continue;
                }
                let g = (problem.boundary)(x);
                let phi = &tab.w_edge[i][ep];
                for r in 0..nw {
                    for cc in r..nw {
                        mat[(nq + r) * n + nq + cc] += wt * phi[r] * phi[cc];
                    }
                    rhs[nq + r] += wt * g * phi[r];
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            mat[i * n + j] = mat[j * n + i];
        }
    }
    Local {
        dofs: element_dofs(disc, t, kind),
        mat,
        rhs,
    }
}

fn assemble_raw(problem: &ProblemSpec, disc: &Discretization, kind: Kind) -> Result<LinearSystem, AssemblyError> {
    if !disc.dofmap.matches(&disc.mesh, &disc.topology) {
        return Err(AssemblyError::DofMapMismatch);
    }
    let dm = &disc.dofmap;
    let layout = match kind {
        Kind::LeastSquares(_) => Layout {
            n_q: dm.n_q(),
            n_w: dm.n_w(),
        },
        Kind::Transport => Layout { n_q: 0, n_w: dm.n_w() },
    };
    let n = layout.total();
    let nt = disc.mesh.num_triangles();
    let tab = Tables::new(disc, matches!(kind, Kind::LeastSquares(_)))?;

    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in 0..nt {
        let dofs = element_dofs(disc, t, kind);
        for &r in &dofs {
            rows[r].extend_from_slice(&dofs);
        }
    }
    let mut matrix = SparseSym::from_pattern(rows)?;
    let mut rhs = vec![0.0; n];

    for start in (0..nt).step_by(BATCH) {
        let end = (start + BATCH).min(nt);
        let locals: Vec<Local> = (start..end)
            .into_par_iter()
            .map(|t| local_system(problem, disc, &tab, t, kind))
            .collect();
        for local in locals {
            let m = local.dofs.len();
            for (i, &r) in local.dofs.iter().enumerate() {
                for (j, &c) in local.dofs.iter().enumerate() {
                    matrix.add(r, c, local.mat[i * m + j]);
                }
                rhs[r] += local.rhs[i];
            }
        }
    }
    Ok(LinearSystem {
        matrix,
        rhs,
        dirichlet_eliminations: Vec::new(),
        layout,
    })
}

/// Adds `Σ_F h_F^{-1} ⟨(ε + |β·n_F|) u, w⟩_F` over the slit edges of the
/// topology, with the matching `value` term on the right-hand side.
pub fn apply_slit(
    sys: &mut LinearSystem,
    disc: &Discretization,
    problem: &ProblemSpec,
    value: &dyn Fn(Point) -> f64,
) -> Result<(), AssemblyError> {
    if !sys.dirichlet_eliminations.is_empty() {
        return Err(AssemblyError::AlreadyEliminated);
    }
    let Some(normal) = disc.topology.slit_normal() else {
        return Ok(());
    };
    let rule = edge_rule(assembly_degree(disc.k()))?;
    let offset = sys.layout.n_q;
    let nw = disc.dofmap.nw_local();
    for &e in disc.topology.slit_edges() {
        let (t, _) = disc.topology.edge_triangles(e);
        let i = disc.topology.local_edge(t, e).expect("edge belongs to its triangle");
        let (ra, rb) = local_edge_vertices(i);
        let verts = disc.mesh.triangle_vertices(t);
        let (a, b) = (verts[(i + 1) % 3], verts[(i + 2) % 3]);
        let h_f = disc.topology.h_f(e);
        let dofs = disc.dofmap.w_dofs(t);
        let mut mat = vec![0.0; nw * nw];
        let mut rhs = vec![0.0; nw];
        let mut phi = vec![0.0; nw];
        let mut grads = vec![[0.0; 2]; nw];
        for (q, &ws) in rule.points.iter().zip(&rule.weights) {
            let s = q[0];
            let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
            let xh = [ra[0] + s * (rb[0] - ra[0]), ra[1] + s * (rb[1] - ra[1])];
            disc.lagrange.eval(xh, &mut phi, &mut grads);
            let beta = (problem.beta)(x);
            let wt = (problem.epsilon + (beta[0] * normal[0] + beta[1] * normal[1]).abs()) / h_f * ws * h_f;
            let g = value(x);
            for r in 0..nw {
                for c in 0..nw {
                    mat[r * nw + c] += wt * phi[r] * phi[c];
                }
                rhs[r] += wt * g * phi[r];
            }
        }
        for r in 0..nw {
            for c in 0..nw {
                // Average the two triangles so the edge block is exactly symmetric.
                let v = 0.5 * (mat[r * nw + c] + mat[c * nw + r]);
                if !sys.matrix.add(offset + dofs[r], offset + dofs[c], v) {
                    return Err(AssemblyError::Pattern(e));
                }
            }
            sys.rhs[offset + dofs[r]] += rhs[r];
        }
    }
    Ok(())
}

/// Fixes boundary `W_h` DOFs to nodal values of `g` by symmetric elimination.
fn eliminate_boundary(sys: &mut LinearSystem, disc: &Discretization, g: &dyn Fn(Point) -> f64) {
    let offset = sys.layout.n_q;
    let nodes = disc.dofmap.w_nodes();
    let fixed: Vec<(usize, f64)> = disc
        .dofmap
        .boundary_w_dofs()
        .iter()
        .map(|&d| (offset + d, g(nodes[d])))
        .collect();
    let mut is_fixed = vec![false; sys.matrix.dim()];
    for &(d, _) in &fixed {
        is_fixed[d] = true;
    }
    for &(d, v) in &fixed {
        let cols = sys.matrix.row_cols(d).to_vec();
        let vals = sys.matrix.row_values(d).to_vec();
        for (c, a) in cols.into_iter().zip(vals) {
            if !is_fixed[c] {
                sys.rhs[c] -= a * v;
            }
        }
    }
    for &(d, v) in &fixed {
        let diag = sys.matrix.get(d, d);
        let diag = if diag > 0.0 { diag } else { 1.0 };
        sys.matrix.eliminate(d, diag);
        sys.rhs[d] = diag * v;
    }
    sys.dirichlet_eliminations = fixed;
}
