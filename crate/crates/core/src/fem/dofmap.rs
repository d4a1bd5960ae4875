//! Global numbering for the pair `Q_h x W_h`.
//!
//! `Q_h` edge DOFs are physical normal-flux moments
//! `(1/|e|) ∫_e p·n_e L_j(s) ds`, with `n_e` the clockwise rotation of the
//! low-to-high edge tangent and `s` running from the lower vertex index.
//! Restricted to an element, a global edge basis function is
//! `sign * |e| * Piola(local basis)`; interior ones are `h_K * Piola(local)`.
//! Both scalings keep the physical basis of unit size.

use crate::mesh::{Mesh, Point, Topology};

use super::lagrange::LagrangeElement;
use super::FemError;

#[derive(Debug, Clone)]
pub struct DofMap {
    k: usize,
    n_q: usize,
    n_w: usize,
    nq_local: usize,
    nw_local: usize,
    q_index: Vec<usize>,
    q_factor: Vec<f64>,
    w_index: Vec<usize>,
    w_nodes: Vec<Point>,
    boundary_w: Vec<usize>,
    n_triangles: usize,
    n_edges: usize,
}

impl DofMap {
    /// Numbering for method index `k` (polynomial degree `k + 1`): edges in
    /// topology order, then element interiors in mesh order.
    pub fn build(mesh: &Mesh, topo: &Topology, k: usize) -> Result<Self, FemError> {
        if k > 2 {
            return Err(FemError::UnsupportedDegree { what: "method index k", degree: k });
        }
        let m = k + 1;
        let nt = mesh.num_triangles();
        let ne = topo.num_edges();
        let nv = mesh.num_vertices();
        let per_edge = m + 1;
        let per_interior = m * (m + 1);
        let nq_local = 3 * per_edge + per_interior;
        let n_q = ne * per_edge + nt * per_interior;

        let w_edge = m - 1;
        let w_int = (m - 1) * m.saturating_sub(2) / 2;
        let nw_local = (m + 1) * (m + 2) / 2;
        let n_w = nv + ne * w_edge + nt * w_int;

        let mut q_index = Vec::with_capacity(nt * nq_local);
        let mut q_factor = Vec::with_capacity(nt * nq_local);
        let mut w_index = Vec::with_capacity(nt * nw_local);
        let lagrange = LagrangeElement::new(m)?;
        let mut w_nodes = vec![[0.0; 2]; n_w];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let edges = topo.triangle_edges(t);
            for i in 0..3 {
                let e = edges[i];
                let agrees = topo.edge_agrees(t, i);
                let len = topo.h_f(e);
                for j in 0..per_edge {
                    let sign = if agrees || j % 2 == 1 { 1.0 } else { -1.0 };
                    q_index.push(e * per_edge + j);
                    q_factor.push(sign * len);
                }
            }
            let hk = topo.h_k(t);
            for l in 0..per_interior {
                q_index.push(ne * per_edge + t * per_interior + l);
                q_factor.push(hk);
            }

            let start = w_index.len();
            w_index.extend_from_slice(tri);
            for i in 0..3 {
                let e = edges[i];
                let agrees = topo.edge_agrees(t, i);
                for tl in 1..m {
                    let g = if agrees { tl - 1 } else { m - 1 - tl };
                    w_index.push(nv + e * w_edge + g);
                }
            }
            for l in 0..w_int {
                w_index.push(nv + ne * w_edge + t * w_int + l);
            }
            let verts = mesh.triangle_vertices(t);
            let map = super::element::ElementMap::new(verts);
            for (node, &g) in lagrange.nodes().iter().zip(&w_index[start..]) {
                w_nodes[g] = map.to_physical(*node);
            }
        }

        let mut boundary_w: Vec<usize> = Vec::new();
        for &e in topo.boundary_edges() {
            boundary_w.extend(topo.edges()[e]);
            boundary_w.extend((0..w_edge).map(|g| nv + e * w_edge + g));
        }
        boundary_w.sort_unstable();
        boundary_w.dedup();

        Ok(DofMap {
            k,
            n_q,
            n_w,
            nq_local,
            nw_local,
            q_index,
            q_factor,
            w_index,
            w_nodes,
            boundary_w,
            n_triangles: nt,
            n_edges: ne,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Polynomial degree `k + 1` of both spaces.
    pub fn degree(&self) -> usize {
        self.k + 1
    }

    pub fn n_q(&self) -> usize {
        self.n_q
    }

    pub fn n_w(&self) -> usize {
        self.n_w
    }

    pub fn total(&self) -> usize {
        self.n_q + self.n_w
    }

    pub fn nq_local(&self) -> usize {
        self.nq_local
    }

    pub fn nw_local(&self) -> usize {
        self.nw_local
    }

    pub fn q_dofs(&self, t: usize) -> &[usize] {
        &self.q_index[t * self.nq_local..(t + 1) * self.nq_local]
    }

    /// Sign times scale of each local `Q_h` basis function on element `t`.
    pub fn q_factors(&self, t: usize) -> &[f64] {
        &self.q_factor[t * self.nq_local..(t + 1) * self.nq_local]
    }

    /// Indices into the `W_h` block (add `n_q` for the combined layout).
    pub fn w_dofs(&self, t: usize) -> &[usize] {
        &self.w_index[t * self.nw_local..(t + 1) * self.nw_local]
    }

    /// Physical coordinates of every global Lagrange node.
    pub fn w_nodes(&self) -> &[Point] {
        &self.w_nodes
    }

    /// Lagrange DOFs located on the domain boundary, sorted.
    pub fn boundary_w_dofs(&self) -> &[usize] {
        &self.boundary_w
    }

    pub fn matches(&self, mesh: &Mesh, topo: &Topology) -> bool {
        self.n_triangles == mesh.num_triangles() && self.n_edges == topo.num_edges()
    }
}
