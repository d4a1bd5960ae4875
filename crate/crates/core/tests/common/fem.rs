//! Conformity and quadrature measurements on finite element spaces.

use lsfem::fem::{edge_rule, triangle_rule, Discretization};
use lsfem::mesh::Point;
use lsfem::Mesh;

/// `∫_T x^a y^b` over the reference triangle, `a! b! / (a + b + 2)!`, in exact
/// rational arithmetic.
pub fn monomial_integral(a: u32, b: u32) -> f64 {
    let fact = |n: u32| (1..=n).map(u128::from).product::<u128>();
    let (num, den) = (fact(a) * fact(b), fact(a + b + 2));
    num as f64 / den as f64
}

/// Worst relative error of the triangle and edge rules of each degree up to
/// `max_degree` against exact monomial integrals.
pub fn quadrature_defect(max_degree: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for degree in 0..=max_degree {
        let rule = triangle_rule(degree).unwrap();
        let erule = edge_rule(degree).unwrap();
        for a in 0..=degree as u32 {
            for b in 0..=(degree as u32 - a) {
                let got = rule.integrate(|p| p[0].powi(a as i32) * p[1].powi(b as i32));
                let want = monomial_integral(a, b);
                worst = worst.max((got - want).abs() / want.max(1e-3));
            }
            let got = erule.integrate(|p| p[0].powi(a as i32));
            worst = worst.max((got - 1.0 / (a as f64 + 1.0)).abs());
        }
    }
    worst
}

/// Largest normal-trace jump of the flux space and trace jump of the scalar
/// space across interior edges.
///
/// Every global basis function is checked by sweeping unit coefficient
/// vectors over the DOFs of each interior edge pair.
pub fn conformity_jumps(k: usize, n: usize, perturb: f64) -> (f64, f64) {
    let mesh = Mesh::generate_structured(n, perturb).unwrap();
    let disc = Discretization::new(mesh, k, None).unwrap();
    let rule = edge_rule(2 * (k + 2)).unwrap();
    let topo = &disc.topology;
    let mut worst_q: f64 = 0.0;
    let mut worst_w: f64 = 0.0;
    for e in 0..topo.num_edges() {
        let (t0, Some(t1)) = topo.edge_triangles(e) else {
            continue;
        };
        let [a, b] = topo.edges()[e];
        let (pa, pb) = (disc.mesh.vertices()[a], disc.mesh.vertices()[b]);
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        let n = [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len];
        let mut q_dofs: Vec<usize> = disc.dofmap.q_dofs(t0).iter().chain(disc.dofmap.q_dofs(t1)).copied().collect();
        q_dofs.sort_unstable();
        q_dofs.dedup();
        let mut w_dofs: Vec<usize> = disc.dofmap.w_dofs(t0).iter().chain(disc.dofmap.w_dofs(t1)).copied().collect();
        w_dofs.sort_unstable();
        w_dofs.dedup();
        for &s in &rule.points {
            let x = [pa[0] + s[0] * (pb[0] - pa[0]), pa[1] + s[0] * (pb[1] - pa[1])];
            let (x0, x1) = (disc.map(t0).to_reference(x), disc.map(t1).to_reference(x));
            for &d in &q_dofs {
                let mut c = vec![0.0; disc.dofmap.n_q()];
                c[d] = 1.0;
                let v0 = disc.eval_q(t0, x0, &c).value;
                let v1 = disc.eval_q(t1, x1, &c).value;
                let jump = (v0[0] - v1[0]) * n[0] + (v0[1] - v1[1]) * n[1];
                worst_q = worst_q.max(jump.abs());
            }
            for &d in &w_dofs {
                let mut c = vec![0.0; disc.dofmap.n_w()];
                c[d] = 1.0;
                let jump = disc.eval_u(t0, x0, &c).0 - disc.eval_u(t1, x1, &c).0;
                worst_w = worst_w.max(jump.abs());
            }
        }
    }
    (worst_q, worst_w)
}

/// Worst relative defect of `∫_K div q = ∮_{∂K} q·n` over every local flux
/// basis function of every element.
pub fn divergence_identity_defect(k: usize, mesh: &Mesh) -> f64 {
    let disc = Discretization::new(mesh.clone(), k, None).unwrap();
    let rule = triangle_rule(2 * k + 4).unwrap();
    let erule = edge_rule(2 * k + 4).unwrap();
    let nl = disc.dofmap.nq_local();
    let mut worst: f64 = 0.0;
    for t in 0..disc.mesh.num_triangles() {
        let map = disc.map(t);
        let det = map.det();
        let mut vol = vec![0.0; nl];
        let mut flux = vec![0.0; nl];
        let mut scale = vec![0.0f64; nl];
        for (&xh, &w) in rule.points.iter().zip(&rule.weights) {
            for (i, s) in disc.q_basis(t, xh).iter().enumerate() {
                vol[i] += w * det * s.div;
                scale[i] = scale[i].max(s.div.abs() * disc.mesh.area(t));
            }
        }
        let verts = disc.mesh.triangle_vertices(t);
        for i in 0..3 {
            let (pa, pb) = (verts[(i + 1) % 3], verts[(i + 2) % 3]);
            let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
            let n = [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len];
            for (&s, &w) in erule.points.iter().zip(&erule.weights) {
                let x: Point = [pa[0] + s[0] * (pb[0] - pa[0]), pa[1] + s[0] * (pb[1] - pa[1])];
                let xh = map.to_reference(x);
                for (j, q) in disc.q_basis(t, xh).iter().enumerate() {
                    flux[j] += w * len * (q.value[0] * n[0] + q.value[1] * n[1]);
                }
            }
        }
        for i in 0..nl {
            let defect = (vol[i] - flux[i]).abs() / scale[i].max(flux[i].abs()).max(1e-300);
            worst = worst.max(defect);
        }
    }
    worst
}
