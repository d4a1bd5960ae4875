//! Oracles shared by the integration suites.
#![allow(dead_code)]

pub mod fem;
pub mod oracle;

use std::sync::Arc;

use lsfem::assembly::{ExactSolution, ProblemSpec, ScalarFn, VectorFn};
use lsfem::mesh::Point;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Polynomial `Σ c_ab x^a y^b` over `a + b <= degree`.
#[derive(Debug, Clone)]
pub struct Poly {
    pub terms: Vec<(i32, i32, f64)>,
}

impl Poly {
    pub fn random(degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for total in 0..=degree as i32 {
            for a in 0..=total {
                terms.push((a, total - a, rng.random::<f64>() * 2.0 - 1.0));
            }
        }
        Poly { terms }
    }

    pub fn value(&self, p: Point) -> f64 {
        self.terms.iter().map(|&(a, b, c)| c * p[0].powi(a) * p[1].powi(b)).sum()
    }

    pub fn grad(&self, p: Point) -> [f64; 2] {
        let mut g = [0.0; 2];
        for &(a, b, c) in &self.terms {
            if a > 0 {
                g[0] += c * a as f64 * p[0].powi(a - 1) * p[1].powi(b);
            }
            if b > 0 {
                g[1] += c * b as f64 * p[0].powi(a) * p[1].powi(b - 1);
            }
        }
        g
    }

    pub fn laplacian(&self, p: Point) -> f64 {
        let mut l = 0.0;
        for &(a, b, c) in &self.terms {
            if a > 1 {
                l += c * (a * (a - 1)) as f64 * p[0].powi(a - 2) * p[1].powi(b);
            }
            if b > 1 {
                l += c * (b * (b - 1)) as f64 * p[0].powi(a) * p[1].powi(b - 2);
            }
        }
        l
    }

    pub fn exact(&self) -> ExactSolution {
        let (a, b, c) = (self.clone(), self.clone(), self.clone());
        ExactSolution {
            u: Arc::new(move |p| a.value(p)),
            grad: Arc::new(move |p| b.grad(p)),
            laplacian: Arc::new(move |p| c.laplacian(p)),
        }
    }
}

/// Manufactured problem with `u = poly`, constant `β` and `c`.
pub fn poly_problem(poly: &Poly, eps: f64, beta: [f64; 2], c: f64) -> ProblemSpec {
    let b: VectorFn = Arc::new(move |_| beta);
    let zero: ScalarFn = Arc::new(|_| 0.0);
    let react: ScalarFn = Arc::new(move |_| c);
    ProblemSpec::manufactured("poly", eps, b, zero, react, poly.exact())
}

/// Gauss-Legendre nodes and weights on `[0, 1]` by the Golub-Welsch
/// eigenvalue method.
pub fn gauss_01(n: usize) -> Vec<(f64, f64)> {
    let mut j = DMatrix::zeros(n, n);
    for i in 1..n {
        let k = i as f64;
        let b = k / (4.0 * k * k - 1.0).sqrt();
        j[(i, i - 1)] = b;
        j[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut out: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            ((x + 1.0) / 2.0, w / 2.0)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Collapsed tensor Gauss rule on the physical triangle `v`: `(point, weight)`.
pub fn triangle_points(v: [Point; 3], n: usize) -> Vec<(Point, f64)> {
    let g = gauss_01(n);
    let det = ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs();
    let mut out = Vec::new();
    for &(s, ws) in &g {
        for &(t, wt) in &g {
            let (a, b) = (s, (1.0 - s) * t);
            let p = [
                v[0][0] + a * (v[1][0] - v[0][0]) + b * (v[2][0] - v[0][0]),
                v[0][1] + a * (v[1][1] - v[0][1]) + b * (v[2][1] - v[0][1]),
            ];
            out.push((p, ws * wt * (1.0 - s) * det));
        }
    }
    out
}

/// Gauss points on segment `a`-`b` with weights including its length.
pub fn segment_points(a: Point, b: Point, n: usize) -> Vec<(Point, f64)> {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    gauss_01(n)
        .into_iter()
        .map(|(s, w)| ([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])], w * len))
        .collect()
}

pub fn dense_lambda_min(a: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(a.clone()).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}
