//! First-order least-squares finite elements for convection-dominated
//! diffusion with weakly imposed Dirichlet boundary conditions.
//!
//! The unknowns are the scaled flux `q = -ε^{1/2} ∇u` in a Raviart-Thomas
//! space and `u` in a continuous Lagrange space. The discrete problem
//! minimizes the residual of the first-order system plus a boundary term
//! weighted by `h_F^{-1} (ε + max(-β·n, 0))`, which yields a symmetric
//! positive definite matrix.

pub mod assembly;
pub mod bench;
pub mod cli;
pub mod fem;
pub mod mesh;
pub mod solver;

pub use assembly::{assemble_ls, assemble_transport, apply_slit, BcMode, LinearSystem, ProblemSpec};
pub use fem::{Discretization, DofMap};
pub use mesh::{Mesh, MeshFormat, Point, SlitSpec, Topology};
pub use solver::{cg_solve, estimate_extremes, CgOptions, Preconditioner, SparseSym, SpectralEstimate};
