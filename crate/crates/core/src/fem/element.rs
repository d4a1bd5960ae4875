//! Affine element maps and the contravariant Piola transform.

use crate::mesh::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMap {
    origin: Point,
    /// Columns are `v1 - v0` and `v2 - v0`.
    jac: [[f64; 2]; 2],
    det: f64,
    inv: [[f64; 2]; 2],
}

impl ElementMap {
    pub fn new(v: [Point; 3]) -> Self {
        let jac = [
            [v[1][0] - v[0][0], v[2][0] - v[0][0]],
            [v[1][1] - v[0][1], v[2][1] - v[0][1]],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv = [
            [jac[1][1] / det, -jac[0][1] / det],
            [-jac[1][0] / det, jac[0][0] / det],
        ];
        ElementMap {
            origin: v[0],
            jac,
            det,
            inv,
        }
    }

    pub fn jacobian(&self) -> [[f64; 2]; 2] {
        self.jac
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn to_physical(&self, xh: [f64; 2]) -> Point {
        [
            self.origin[0] + self.jac[0][0] * xh[0] + self.jac[0][1] * xh[1],
            self.origin[1] + self.jac[1][0] * xh[0] + self.jac[1][1] * xh[1],
        ]
    }

    pub fn to_reference(&self, x: Point) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        [
            self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        ]
    }

    /// Physical gradient `J^{-T} g`.
    pub fn grad(&self, g: [f64; 2]) -> [f64; 2] {
        [
            self.inv[0][0] * g[0] + self.inv[1][0] * g[1],
            self.inv[0][1] * g[0] + self.inv[1][1] * g[1],
        ]
    }

    /// Contravariant Piola map of a reference vector: `J v / det J`.
    pub fn piola(&self, v: [f64; 2]) -> [f64; 2] {
        [
            (self.jac[0][0] * v[0] + self.jac[0][1] * v[1]) / self.det,
            (self.jac[1][0] * v[0] + self.jac[1][1] * v[1]) / self.det,
        ]
    }

    /// Divergence of a Piola-mapped field given its reference divergence.
    pub fn piola_div(&self, div: f64) -> f64 {
        div / self.det
    }

    /// Inverse Piola pullback of a physical vector: `det J * J^{-1} v`.
    pub fn pullback(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.det * (self.inv[0][0] * v[0] + self.inv[0][1] * v[1]),
            self.det * (self.inv[1][0] * v[0] + self.inv[1][1] * v[1]),
        ]
    }
}
