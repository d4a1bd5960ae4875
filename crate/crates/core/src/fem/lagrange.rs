//! Nodal Lagrange elements of degree 1 to 3 on the reference triangle.

use nalgebra::DMatrix;

use super::{poly, FemError, REF_VERTICES};

/// Scalar basis values and reference gradients at a set of points,
/// indexed `[point][basis]`.
#[derive(Debug, Clone)]
pub struct ScalarTable {
    pub values: Vec<Vec<f64>>,
    pub grads: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone)]
pub struct LagrangeElement {
    degree: usize,
    nodes: Vec<[f64; 2]>,
    exps: Vec<(i32, i32)>,
    /// `coeffs[i * dim + k]`: coefficient of monomial `i` in basis function `k`.
    coeffs: Vec<f64>,
}

impl LagrangeElement {
    /// Node order: the three vertices, then `degree - 1` nodes on each local
    /// edge `i` (from vertex `i+1` towards vertex `i+2`), then interior nodes.
    pub fn new(degree: usize) -> Result<Self, FemError> {
        if !(1..=3).contains(&degree) {
            return Err(FemError::UnsupportedDegree {
                what: "Lagrange",
                degree,
            });
        }
        let m = degree as f64;
        let mut nodes: Vec<[f64; 2]> = REF_VERTICES.to_vec();
        for i in 0..3 {
            let a = REF_VERTICES[(i + 1) % 3];
            let b = REF_VERTICES[(i + 2) % 3];
            for t in 1..degree {
                let s = t as f64 / m;
                nodes.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
            }
        }
        for b in 1..degree {
            for a in 1..degree - b {
                nodes.push([a as f64 / m, b as f64 / m]);
            }
        }
        let exps = poly::exponents(degree);
        let n = exps.len();
        debug_assert_eq!(nodes.len(), n);
        let mut vand = DMatrix::zeros(n, n);
        let (mut v, mut dx, mut dy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for (r, &p) in nodes.iter().enumerate() {
            poly::eval(&exps, p, &mut v, &mut dx, &mut dy);
            for c in 0..n {
                vand[(r, c)] = v[c];
            }
        }
        let inv = vand.try_inverse().ok_or(FemError::Singular("Lagrange Vandermonde"))?;
        let coeffs = (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).map(|(i, k)| inv[(i, k)]).collect();
        Ok(LagrangeElement {
            degree,
            nodes,
            exps,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    /// Values and reference gradients of every basis function at `p`.
    pub fn eval(&self, p: [f64; 2], values: &mut [f64], grads: &mut [[f64; 2]]) {
        let n = self.dim();
        let (mut v, mut dx, mut dy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        poly::eval(&self.exps, p, &mut v, &mut dx, &mut dy);
        for k in 0..n {
            let (mut s, mut gx, mut gy) = (0.0, 0.0, 0.0);
            for i in 0..n {
                let c = self.coeffs[i * n + k];
                s += c * v[i];
                gx += c * dx[i];
                gy += c * dy[i];
            }
            values[k] = s;
            grads[k] = [gx, gy];
        }
    }

    pub fn tabulate(&self, points: &[[f64; 2]]) -> ScalarTable {
        let n = self.dim();
        let mut values = Vec::with_capacity(points.len());
        let mut grads = Vec::with_capacity(points.len());
        for &p in points {
            let mut v = vec![0.0; n];
            let mut g = vec![[0.0; 2]; n];
            self.eval(p, &mut v, &mut g);
            values.push(v);
            grads.push(g);
        }
        ScalarTable { values, grads }
    }
}

/// Tabulates the degree-`degree` nodal basis at reference points.
pub fn lagrange_basis(degree: usize, points: &[[f64; 2]]) -> Result<ScalarTable, FemError> {
    Ok(LagrangeElement::new(degree)?.tabulate(points))
}
