//! Reference elements, quadrature, and the discrete spaces `Q_h x W_h`.
//!
//! `Q_h` is the H(div)-conforming Raviart-Thomas space of order `k + 1`,
//! `W_h` the continuous Lagrange space of degree `k + 1`.

pub mod dofmap;
pub mod element;
pub mod lagrange;
mod poly;
pub mod quadrature;
pub mod rt;

use thiserror::Error;

use crate::mesh::{Mesh, MeshError, Point, SlitSpec, Topology};

pub use dofmap::DofMap;
pub use element::ElementMap;
pub use lagrange::{lagrange_basis, LagrangeElement, ScalarTable};
pub use poly::shifted_legendre;
pub use quadrature::{edge_rule, triangle_rule, QuadRule};
pub use rt::{rt_basis, RtElement, VectorSample, VectorTable};

pub const REF_VERTICES: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

#[derive(Debug, Error)]
pub enum FemError {
    #[error("unsupported {what} degree {degree}")]
    UnsupportedDegree { what: &'static str, degree: usize },
    #[error("singular {0}")]
    Singular(&'static str),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Quadrature degree used for assembly.
pub fn assembly_degree(k: usize) -> usize {
    2 * (k + 2) + 2
}

/// Quadrature degree used for error norms.
pub fn error_degree(k: usize) -> usize {
    2 * (k + 2) + 4
}

/// A mesh with its topology, DOF numbering and reference elements.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub mesh: Mesh,
    pub topology: Topology,
    pub dofmap: DofMap,
    pub lagrange: LagrangeElement,
    pub rt: RtElement,
}

/// Physical values of the local `Q_h` basis at one point, already scaled and
/// signed so that they are restrictions of global basis functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct QSample {
    pub value: [f64; 2],
    pub div: f64,
}

impl Discretization {
    pub fn new(mesh: Mesh, k: usize, slit: Option<&SlitSpec>) -> Result<Self, FemError> {
        let topology = Topology::build(&mesh, slit)?;
        let dofmap = DofMap::build(&mesh, &topology, k)?;
        Ok(Discretization {
            lagrange: LagrangeElement::new(k + 1)?,
            rt: RtElement::new(k + 1)?,
            mesh,
            topology,
            dofmap,
        })
    }

    pub fn k(&self) -> usize {
        self.dofmap.k()
    }

    pub fn map(&self, t: usize) -> ElementMap {
        ElementMap::new(self.mesh.triangle_vertices(t))
    }

    /// Local `W_h` basis values and physical gradients at reference point `xh`.
    pub fn w_basis(&self, t: usize, xh: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
        let n = self.lagrange.dim();
        let mut v = vec![0.0; n];
        let mut g = vec![[0.0; 2]; n];
        self.lagrange.eval(xh, &mut v, &mut g);
        let map = self.map(t);
        for gi in g.iter_mut() {
            *gi = map.grad(*gi);
        }
        (v, g)
    }

    /// Local `Q_h` basis (global restrictions) at reference point `xh`.
    pub fn q_basis(&self, t: usize, xh: [f64; 2]) -> Vec<QSample> {
        let map = self.map(t);
        let factors = self.dofmap.q_factors(t);
        self.rt
            .eval_all(xh)
            .iter()
            .zip(factors)
            .map(|(s, &f)| {
                let v = map.piola(s.value);
                QSample {
                    value: [f * v[0], f * v[1]],
                    div: f * map.piola_div(s.div),
                }
            })
            .collect()
    }

    /// `u_h` and its gradient on element `t` at `xh` from `W_h` coefficients.
    pub fn eval_u(&self, t: usize, xh: [f64; 2], w_coeffs: &[f64]) -> (f64, [f64; 2]) {
        let (v, g) = self.w_basis(t, xh);
        let mut u = 0.0;
        let mut grad = [0.0; 2];
        for ((&dof, vi), gi) in self.dofmap.w_dofs(t).iter().zip(&v).zip(&g) {
            let c = w_coeffs[dof];
            u += c * vi;
            grad[0] += c * gi[0];
            grad[1] += c * gi[1];
        }
        (u, grad)
    }

    /// `q_h` and its divergence on element `t` at `xh` from `Q_h` coefficients.
    pub fn eval_q(&self, t: usize, xh: [f64; 2], q_coeffs: &[f64]) -> QSample {
        let mut out = QSample::default();
        for (s, &dof) in self.q_basis(t, xh).iter().zip(self.dofmap.q_dofs(t)) {
            let c = q_coeffs[dof];
            out.value[0] += c * s.value[0];
            out.value[1] += c * s.value[1];
            out.div += c * s.div;
        }
        out
    }

    /// Nodal interpolant of `f` in `W_h`.
    pub fn interpolate_w(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.dofmap.w_nodes().iter().map(|&p| f(p)).collect()
    }

    /// Degree-of-freedom interpolant of a vector field in `Q_h`.
    pub fn interpolate_q(&self, f: impl Fn(Point) -> [f64; 2]) -> Vec<f64> {
        let mut out = vec![0.0; self.dofmap.n_q()];
        for t in 0..self.mesh.num_triangles() {
            let map = self.map(t);
            let local = self.rt.interpolate(|xh| map.pullback(f(map.to_physical(xh))));
            for ((&dof, &fac), d) in self.dofmap.q_dofs(t).iter().zip(self.dofmap.q_factors(t)).zip(local) {
                out[dof] = d / fac;
            }
        }
        out
    }
}
