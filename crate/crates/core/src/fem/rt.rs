//! Raviart-Thomas elements `P_m^2 + x P_m` on the reference triangle.
//!
//! Degrees of freedom: on each local edge, moments of the normal trace
//! against shifted Legendre polynomials of degree `0..=m` (parametrized from
//! the edge's start vertex, outward unit normal); in the interior, moments of
//! each component against centered monomials of `P_{m-1}`. The basis is the dual
//! of these functionals.

use nalgebra::DMatrix;

use super::quadrature::{edge_rule, triangle_rule};
use super::{poly, FemError, REF_VERTICES};

/// Value, divergence and full reference Jacobian of one vector basis function.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct VectorSample {
    pub value: [f64; 2],
    pub div: f64,
    /// `jac[r][c] = d value_r / d x_c`.
    pub jac: [[f64; 2]; 2],
}

/// Vector basis samples indexed `[point][basis]`.
#[derive(Debug, Clone)]
pub struct VectorTable {
    pub samples: Vec<Vec<VectorSample>>,
}

#[derive(Debug, Clone)]
pub struct RtElement {
    order: usize,
    exps: Vec<(i32, i32)>,
    /// Per basis function: monomial coefficients of the x and y components.
    comp_x: Vec<Vec<f64>>,
    comp_y: Vec<Vec<f64>>,
}

/// Polynomials are expanded in `3 (x - 1/3)`, centered and scaled to the
/// reference triangle, which keeps the dual coefficients small.
fn centered(p: [f64; 2]) -> [f64; 2] {
    [3.0 * p[0] - 1.0, 3.0 * p[1] - 1.0]
}

/// Start and end vertices of local edge `i`.
pub fn local_edge_vertices(i: usize) -> ([f64; 2], [f64; 2]) {
    (REF_VERTICES[(i + 1) % 3], REF_VERTICES[(i + 2) % 3])
}

impl RtElement {
    pub fn new(order: usize) -> Result<Self, FemError> {
        if !(1..=3).contains(&order) {
            return Err(FemError::UnsupportedDegree { what: "Raviart-Thomas", degree: order });
        }
        let m = order;
        let exps = poly::exponents(m + 1);
        let nm = exps.len();
        let pos = |a: i32, b: i32| exps.iter().position(|&e| e == (a, b)).unwrap();

        // Spanning set of P_m^2 + x * (homogeneous P_m).
        let mut span: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        for &(a, b) in poly::exponents(m).iter() {
            let mut ex = vec![0.0; nm];
            ex[pos(a, b)] = 1.0;
            span.push((ex.clone(), vec![0.0; nm]));
            span.push((vec![0.0; nm], ex));
        }
        for b in 0..=m as i32 {
            let a = m as i32 - b;
            let mut ex = vec![0.0; nm];
            let mut ey = vec![0.0; nm];
            ex[pos(a + 1, b)] = 1.0;
            ey[pos(a, b + 1)] = 1.0;
            span.push((ex, ey));
        }
        let n = span.len();
        debug_assert_eq!(n, (m + 1) * (m + 3));

        let proto = RtElement {
            order,
            exps: exps.clone(),
            comp_x: span.iter().map(|s| s.0.clone()).collect(),
            comp_y: span.iter().map(|s| s.1.clone()).collect(),
        };
        let dofs = proto.apply_dofs_to_all()?;
        let inv = dofs.try_inverse().ok_or(FemError::Singular("Raviart-Thomas DOF matrix"))?;
        // basis_k = sum_j inv[j, k] span_j
        let mut comp_x = vec![vec![0.0; nm]; n];
        let mut comp_y = vec![vec![0.0; nm]; n];
        for k in 0..n {
            for j in 0..n {
                let c = inv[(j, k)];
                if c == 0.0 {
                    continue;
                }
                for i in 0..nm {
                    comp_x[k][i] += c * span[j].0[i];
                    comp_y[k][i] += c * span[j].1[i];
                }
            }
        }
        Ok(RtElement {
            order,
            exps,
            comp_x,
            comp_y,
        })
    }

    /// Matrix `D[i][j] = dof_i(basis_j)` for the current component tables.
    fn apply_dofs_to_all(&self) -> Result<DMatrix<f64>, FemError> {
        let n = self.dim_unchecked();
        let mut d = DMatrix::zeros(n, n);
        let erule = edge_rule(2 * self.order + 2)?;
        let trule = triangle_rule(2 * self.order + 1)?;
        let m = self.order;
        for i in 0..3 {
            let (a, b) = local_edge_vertices(i);
            let t = [b[0] - a[0], b[1] - a[1]];
            // Outward normal scaled by the edge length; cancels ds = |t| dt.
            let nscaled = [t[1], -t[0]];
            for (q, &w) in erule.points.iter().zip(&erule.weights) {
                let s = q[0];
                let p = [a[0] + s * t[0], a[1] + s * t[1]];
                let samples = self.eval_all(p);
                for j in 0..=m {
                    let l = poly::shifted_legendre(j, s);
                    let row = i * (m + 1) + j;
                    for (c, smp) in samples.iter().enumerate() {
                        d[(row, c)] += w * l * (smp.value[0] * nscaled[0] + smp.value[1] * nscaled[1]);
                    }
                }
            }
        }
        let interior = poly::exponents(m - 1);
        for (p, &w) in trule.points.iter().zip(&trule.weights) {
            let samples = self.eval_all(*p);
            for (l, &(a, b)) in interior.iter().enumerate() {
                let c = centered(*p);
                let mono = c[0].powi(a) * c[1].powi(b);
                for comp in 0..2 {
                    let row = 3 * (m + 1) + 2 * l + comp;
                    for (c, smp) in samples.iter().enumerate() {
                        d[(row, c)] += w * mono * smp.value[comp];
                    }
                }
            }
        }
        Ok(d)
    }

    /// Applies the local functionals to the current basis; identity by
    /// construction.
    pub fn dof_matrix(&self) -> DMatrix<f64> {
        self.apply_dofs_to_all().expect("rule degrees are within range")
    }

    /// Applies the local functionals to an arbitrary reference field.
    pub fn interpolate(&self, field: impl Fn([f64; 2]) -> [f64; 2]) -> Vec<f64> {
        let m = self.order;
        let n = self.dim();
        let mut out = vec![0.0; n];
        let erule = edge_rule(2 * m + 8).expect("rule degree within range");
        let trule = triangle_rule(2 * m + 8).expect("rule degree within range");
        for i in 0..3 {
            let (a, b) = local_edge_vertices(i);
            let t = [b[0] - a[0], b[1] - a[1]];
            for (q, &w) in erule.points.iter().zip(&erule.weights) {
                let s = q[0];
                let v = field([a[0] + s * t[0], a[1] + s * t[1]]);
                let flux = v[0] * t[1] - v[1] * t[0];
                for j in 0..=m {
                    out[i * (m + 1) + j] += w * poly::shifted_legendre(j, s) * flux;
                }
            }
        }
        let interior = poly::exponents(m - 1);
        for (p, &w) in trule.points.iter().zip(&trule.weights) {
            let v = field(*p);
            for (l, &(a, b)) in interior.iter().enumerate() {
                let c = centered(*p);
                let mono = c[0].powi(a) * c[1].powi(b);
                out[3 * (m + 1) + 2 * l] += w * mono * v[0];
                out[3 * (m + 1) + 2 * l + 1] += w * mono * v[1];
            }
        }
        out
    }

    fn dim_unchecked(&self) -> usize {
        self.comp_x.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `(order + 1)(order + 3)`.
    pub fn dim(&self) -> usize {
        self.comp_x.len()
    }

    pub fn edge_dofs_per_edge(&self) -> usize {
        self.order + 1
    }

    pub fn interior_dofs(&self) -> usize {
        self.order * (self.order + 1)
    }

    pub fn eval_all(&self, p: [f64; 2]) -> Vec<VectorSample> {
        let nm = self.exps.len();
        let (mut v, mut dx, mut dy) = (vec![0.0; nm], vec![0.0; nm], vec![0.0; nm]);
        poly::eval(&self.exps, centered(p), &mut v, &mut dx, &mut dy);
        dx.iter_mut().chain(dy.iter_mut()).for_each(|d| *d *= 3.0);
        self.comp_x
            .iter()
            .zip(&self.comp_y)
            .map(|(cx, cy)| {
                let mut s = VectorSample::default();
                for i in 0..nm {
                    s.value[0] += cx[i] * v[i];
                    s.value[1] += cy[i] * v[i];
                    s.jac[0][0] += cx[i] * dx[i];
                    s.jac[0][1] += cx[i] * dy[i];
                    s.jac[1][0] += cy[i] * dx[i];
                    s.jac[1][1] += cy[i] * dy[i];
                }
                s.div = s.jac[0][0] + s.jac[1][1];
                s
            })
            .collect()
    }

    pub fn tabulate(&self, points: &[[f64; 2]]) -> VectorTable {
        VectorTable {
            samples: points.iter().map(|&p| self.eval_all(p)).collect(),
        }
    }
}

/// Tabulates the order-`order` Raviart-Thomas basis at reference points.
pub fn rt_basis(order: usize, points: &[[f64; 2]]) -> Result<VectorTable, FemError> {
    Ok(RtElement::new(order)?.tabulate(points))
}
