use crate::assembly::ProblemSpec;
use crate::fem::{edge_rule, error_degree, rt::local_edge_vertices, triangle_rule, Discretization};
use crate::mesh::Point;

use super::BenchError;

/// Axis-aligned rectangle; an element is selected when all its vertices lie
/// inside (closed, with a `1e-12` margin).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lo: Point,
    pub hi: Point,
}

impl Region {
    pub fn contains(&self, p: Point) -> bool {
        let tol = 1e-12;
        p[0] >= self.lo[0] - tol && p[0] <= self.hi[0] + tol && p[1] >= self.lo[1] - tol && p[1] <= self.hi[1] + tol
    }

    pub fn selects(&self, vertices: &[Point; 3]) -> bool {
        vertices.iter().all(|&v| self.contains(v))
    }
}

impl std::str::FromStr for Region {
    type Err = String;

    /// Parses `x0,y0,x1,y1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("invalid region '{s}': {e}")))
            .collect::<Result<_, _>>()?;
        if v.len() != 4 || !(v[0] < v[2] && v[1] < v[3]) {
            return Err(format!("region '{s}' must be x0,y0,x1,y1 with x0<x1 and y0<y1"));
        }
        Ok(Region {
            lo: [v[0], v[1]],
            hi: [v[2], v[3]],
        })
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]x[{},{}]", self.lo[0], self.hi[0], self.lo[1], self.hi[1])
    }
}

/// Error components of one discrete solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub level: usize,
    /// Largest element diameter.
    pub h: f64,
    pub n_dofs: usize,
    pub e_l2: f64,
    /// `ε^{1/2} ‖∇(u - u_h)‖`.
    pub e_grad: f64,
    /// `‖q - q_h‖`; absent for transport solutions.
    pub e_q: Option<f64>,
    /// `‖β·∇(u - u_h)‖`.
    pub e_stream: f64,
    /// Boundary error weighted by `h_F^{-1} (ε + max(-β·n, 0))`.
    pub e_bdry: f64,
    pub region: Option<Region>,
    pub eoc_l2: Option<f64>,
    pub eoc_grad: Option<f64>,
    pub eoc_stream: Option<f64>,
}

/// Evaluates the error of `(q_h, u_h)` against the exact solution of
/// `problem`. `q_coeffs` is empty for transport solutions.
pub fn error_norms(
    problem: &ProblemSpec,
    disc: &Discretization,
    q_coeffs: &[f64],
    w_coeffs: &[f64],
    region: Option<Region>,
) -> Result<ErrorReport, BenchError> {
    let exact = problem
        .exact
        .as_ref()
        .ok_or_else(|| BenchError::NoExactSolution(problem.name.clone()))?;
    let deg = error_degree(disc.k());
    let rule = triangle_rule(deg)?;
    let erule = edge_rule(deg)?;
    let eps = problem.epsilon;
    let se = eps.sqrt();
    let with_q = !q_coeffs.is_empty();
    let (mut l2, mut grad, mut qerr, mut stream, mut bdry) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for t in 0..disc.mesh.num_triangles() {
        let verts = disc.mesh.triangle_vertices(t);
        if let Some(r) = region {
            if !r.selects(&verts) {
                continue;
            }
        }
        let map = disc.map(t);
        let det = map.det();
        for (&xh, &w) in rule.points.iter().zip(&rule.weights) {
            let x = map.to_physical(xh);
            let (uh, guh) = disc.eval_u(t, xh, w_coeffs);
            let g = (exact.grad)(x);
            let eu = (exact.u)(x) - uh;
            let eg = [g[0] - guh[0], g[1] - guh[1]];
            let b = (problem.beta)(x);
            let jw = w * det;
            l2 += jw * eu * eu;
            grad += jw * eps * (eg[0] * eg[0] + eg[1] * eg[1]);
            stream += jw * (b[0] * eg[0] + b[1] * eg[1]).powi(2);
            if with_q {
                let qh = disc.eval_q(t, xh, q_coeffs).value;
                let d = [-se * g[0] - qh[0], -se * g[1] - qh[1]];
                qerr += jw * (d[0] * d[0] + d[1] * d[1]);
            }
        }
        for (i, &e) in disc.topology.triangle_edges(t).iter().enumerate() {
            let Some(n) = disc.topology.outward_normal(e) else {
                continue;
            };
            let h_f = disc.topology.h_f(e);
            let (ra, rb) = local_edge_vertices(i);
            for (q, &ws) in erule.points.iter().zip(&erule.weights) {
                let s = q[0];
                let xh = [ra[0] + s * (rb[0] - ra[0]), ra[1] + s * (rb[1] - ra[1])];
                let x = map.to_physical(xh);
                let b = (problem.beta)(x);
                let weight = (eps + (-(b[0] * n[0] + b[1] * n[1])).max(0.0)) / h_f;
                let eu = (exact.u)(x) - disc.eval_u(t, xh, w_coeffs).0;
                bdry += ws * h_f * weight * eu * eu;
            }
        }
    }
    let n_dofs = w_coeffs.len() + q_coeffs.len();
    Ok(ErrorReport {
        level: 0,
        h: disc.mesh.max_h(),
        n_dofs,
        e_l2: l2.sqrt(),
        e_grad: grad.sqrt(),
        e_q: with_q.then(|| qerr.sqrt()),
        e_stream: stream.sqrt(),
        e_bdry: bdry.sqrt(),
        region,
        eoc_l2: None,
        eoc_grad: None,
        eoc_stream: None,
    })
}

/// Largest excursion of `u_h` outside `[lo, hi]` over the Lagrange nodes and
/// error quadrature points of every element.
pub fn overshoot(disc: &Discretization, w_coeffs: &[f64], lo: f64, hi: f64) -> f64 {
    let rule = triangle_rule(error_degree(disc.k())).expect("supported degree");
    let mut worst: f64 = 0.0;
    for t in 0..disc.mesh.num_triangles() {
        for &xh in disc.lagrange.nodes().iter().chain(&rule.points) {
            let u = disc.eval_u(t, xh, w_coeffs).0;
            worst = worst.max(u - hi).max(lo - u);
        }
    }
    worst
}

/// Values of `u_h` at physical points; `None` for points outside the mesh.
pub fn sample_points(disc: &Discretization, w_coeffs: &[f64], points: &[Point]) -> Vec<Option<f64>> {
    points
        .iter()
        .map(|&p| {
            (0..disc.mesh.num_triangles()).find_map(|t| {
                let xh = disc.map(t).to_reference(p);
                let tol = 1e-12;
                (xh[0] >= -tol && xh[1] >= -tol && xh[0] + xh[1] <= 1.0 + tol)
                    .then(|| disc.eval_u(t, xh, w_coeffs).0)
            })
        })
        .collect()
}
