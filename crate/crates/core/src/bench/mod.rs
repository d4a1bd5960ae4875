//! Benchmark catalog, error norms, convergence and conditioning studies, and
//! report output.

pub mod catalog;
mod norms;
pub mod report;
mod study;

use std::path::PathBuf;

use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::fem::FemError;
use crate::mesh::MeshError;
use crate::solver::SolverError;

pub use catalog::{get_problem, Overrides, CATALOG};
pub use norms::{error_norms, overshoot, sample_points, ErrorReport, Region};
pub use study::{
    assemble, compare_bc_modes, condition_study, convergence_study, discretize, eoc, mesh_ladder, refined_ladder, solve, BcComparison,
    ConditionRow, ModeOutcome, Solution,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("catalog: unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("catalog: problem '{problem}' {reason} (got eps = {epsilon:e})")]
    IncompatibleEpsilon {
        problem: String,
        epsilon: f64,
        reason: &'static str,
    },
    #[error("catalog: problem '{problem}' does not accept an override of {what}")]
    Override { problem: String, what: &'static str },
    #[error("norms: problem '{0}' has no exact solution")]
    NoExactSolution(String),
    #[error("mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("discretization: {0}")]
    Fem(#[from] FemError),
    #[error("assembly: {0}")]
    Assembly(#[from] AssemblyError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("output: writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl BenchError {
    /// Failures of the numerical stages, as opposed to input or I/O errors.
    pub fn is_numerical(&self) -> bool {
        matches!(self, BenchError::Solver(_) | BenchError::Assembly(AssemblyError::Solver(_)))
    }
}
