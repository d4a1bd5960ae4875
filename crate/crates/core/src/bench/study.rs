use crate::assembly::{assemble_ls, assemble_transport, BcMode, LinearSystem, ProblemSpec};
use crate::fem::Discretization;
use crate::mesh::Mesh;
use crate::solver::{cg_solve, estimate_extremes, CgOptions, SpectralEstimate, SpectralOptions};

use super::catalog::{get_problem, Overrides};
use super::norms::{error_norms, overshoot, ErrorReport, Region};
use super::BenchError;

/// Discrete solution split into its flux and scalar blocks.
#[derive(Debug, Clone)]
pub struct Solution {
    pub q: Vec<f64>,
    pub w: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub n_dofs: usize,
}

/// Builds the discretization for `problem` on `mesh`, resolving its slit.
pub fn discretize(problem: &ProblemSpec, mesh: Mesh, k: usize) -> Result<Discretization, BenchError> {
    let slit = problem.slit.as_ref().map(|s| s.segment);
    Ok(Discretization::new(mesh, k, slit.as_ref())?)
}

/// Assembles the system matching `problem`: transport for `ε = 0`, least
/// squares in `mode` otherwise.
pub fn assemble(problem: &ProblemSpec, disc: &Discretization, mode: BcMode) -> Result<LinearSystem, BenchError> {
    problem.assumption_violations(disc);
    Ok(if problem.epsilon == 0.0 {
        assemble_transport(problem, disc)?
    } else {
        assemble_ls(problem, disc, mode)?
    })
}

pub fn solve(problem: &ProblemSpec, disc: &Discretization, mode: BcMode, cg: &CgOptions) -> Result<Solution, BenchError> {
    let sys = assemble(problem, disc, mode)?;
    let sol = cg_solve(&sys.matrix, &sys.rhs, cg)?;
    let mut x = sol.x;
    for &(d, v) in &sys.dirichlet_eliminations {
        x[d] = v;
    }
    let w = x.split_off(sys.layout.n_q);
    log::debug!(
        "{}: {} dofs, {} CG iterations, residual {:e}",
        problem.name,
        sys.layout.total(),
        sol.iterations,
        sol.residual
    );
    Ok(Solution {
        q: x,
        w,
        iterations: sol.iterations,
        residual: sol.residual,
        n_dofs: sys.layout.total(),
    })
}

/// Independently generated jittered meshes with `base_n · 2^l` cells per
/// side.
pub fn mesh_ladder(base_n: usize, levels: usize, perturb: f64) -> Result<Vec<Mesh>, BenchError> {
    (0..levels)
        .map(|l| Ok(Mesh::generate_structured(base_n << l, perturb)?))
        .collect()
}

/// `levels` meshes obtained from `base` by repeated uniform refinement.
pub fn refined_ladder(base: Mesh, levels: usize) -> Vec<Mesh> {
    let mut out: Vec<Mesh> = Vec::with_capacity(levels);
    if levels > 0 {
        out.push(base);
    }
    while out.len() < levels {
        let next = out.last().expect("non-empty").refine_uniform();
        out.push(next);
    }
    out
}

/// Experimental order of convergence between two meshes with `t_prev` and
/// `t` triangles, measured against the mean mesh size `T^{-1/2}`. Equals
/// `log2(e_prev / e)` whenever the element count quadruples.
pub fn eoc(e_prev: f64, e: f64, t_prev: usize, t: usize) -> Option<f64> {
    (e_prev > 0.0 && e > 0.0 && t_prev != t).then(|| 2.0 * (e_prev / e).ln() / (t as f64 / t_prev as f64).ln())
}

pub fn convergence_study(
    problem: &ProblemSpec,
    k: usize,
    mode: BcMode,
    meshes: &[Mesh],
    region: Option<Region>,
    cg: &CgOptions,
) -> Result<Vec<ErrorReport>, BenchError> {
    if problem.exact.is_none() {
        return Err(BenchError::NoExactSolution(problem.name.clone()));
    }
    let mut rows: Vec<ErrorReport> = Vec::with_capacity(meshes.len());
    let mut prev_t = 0;
    for (level, mesh) in meshes.iter().enumerate() {
        let disc = discretize(problem, mesh.clone(), k)?;
        let sol = solve(problem, &disc, mode, cg)?;
        let mut rep = error_norms(problem, &disc, &sol.q, &sol.w, region)?;
        rep.level = level;
        if let Some(prev) = rows.last() {
            let t = mesh.num_triangles();
            rep.eoc_l2 = eoc(prev.e_l2, rep.e_l2, prev_t, t);
            rep.eoc_grad = eoc(prev.e_grad, rep.e_grad, prev_t, t);
            rep.eoc_stream = eoc(prev.e_stream, rep.e_stream, prev_t, t);
        }
        prev_t = mesh.num_triangles();
        rows.push(rep);
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct ConditionRow {
    pub level: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub epsilon: f64,
    pub estimate: SpectralEstimate,
    /// `κ` over `κ` of the previous level at the same `ε`.
    pub level_ratio: Option<f64>,
}

pub fn condition_study(
    name: &str,
    overrides: &Overrides,
    k: usize,
    mode: BcMode,
    meshes: &[Mesh],
    epsilons: &[f64],
    opts: &SpectralOptions,
) -> Result<Vec<ConditionRow>, BenchError> {
    let mut rows: Vec<ConditionRow> = Vec::new();
    for (level, mesh) in meshes.iter().enumerate() {
        for &eps in epsilons {
            let problem = get_problem(name, eps, overrides)?;
            let disc = discretize(&problem, mesh.clone(), k)?;
            let sys = assemble(&problem, &disc, mode)?;
            let estimate = estimate_extremes(&sys.matrix, opts)?;
            let level_ratio = rows
                .iter()
                .rev()
                .find(|r| r.epsilon == eps && r.level + 1 == level)
                .map(|r| estimate.kappa / r.estimate.kappa);
            rows.push(ConditionRow {
                level,
                h: mesh.max_h(),
                n_dofs: sys.layout.total(),
                epsilon: eps,
                estimate,
                level_ratio,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct ModeOutcome {
    pub mode: BcMode,
    pub report: Option<ErrorReport>,
    /// Largest excursion of `u_h` outside `[0, 1]`.
    pub overshoot: f64,
    pub solution: Solution,
}

#[derive(Debug, Clone)]
pub struct BcComparison {
    pub weak: ModeOutcome,
    pub strong: ModeOutcome,
    /// Weak-mode over strong-mode L² error, when both are available.
    pub ratio: Option<f64>,
}

pub fn compare_bc_modes(
    problem: &ProblemSpec,
    k: usize,
    mesh: &Mesh,
    region: Option<Region>,
    cg: &CgOptions,
) -> Result<BcComparison, BenchError> {
    let disc = discretize(problem, mesh.clone(), k)?;
    let run = |mode: BcMode| -> Result<ModeOutcome, BenchError> {
        let solution = solve(problem, &disc, mode, cg)?;
        let report = match problem.exact {
            Some(_) => Some(error_norms(problem, &disc, &solution.q, &solution.w, region)?),
            None => None,
        };
        Ok(ModeOutcome {
            mode,
            report,
            overshoot: overshoot(&disc, &solution.w, 0.0, 1.0),
            solution,
        })
    };
    let weak = run(BcMode::Weak)?;
    let strong = run(BcMode::Strong)?;
    let ratio = match (&weak.report, &strong.report) {
        (Some(w), Some(s)) if s.e_l2 > 0.0 => Some(w.e_l2 / s.e_l2),
        _ => None,
    };
    Ok(BcComparison { weak, strong, ratio })
}
