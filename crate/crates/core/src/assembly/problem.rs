use std::fmt;
use std::sync::Arc;

use crate::fem::{triangle_rule, Discretization};
use crate::mesh::{Point, SlitSpec};

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

/// Exact solution `u` with the derivatives needed to manufacture `f` and to
/// measure errors.
#[derive(Clone)]
pub struct ExactSolution {
    pub u: ScalarFn,
    pub grad: VectorFn,
    pub laplacian: ScalarFn,
}

/// Data prescribed along an interior slit.
#[derive(Clone)]
pub struct SlitData {
    pub segment: SlitSpec,
    pub value: ScalarFn,
}

/// Coefficients and data of `-ε Δu + β·∇u + c u = f`, `u = g` on the boundary.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub epsilon: f64,
    pub beta: VectorFn,
    pub div_beta: ScalarFn,
    pub reaction: ScalarFn,
    pub source: ScalarFn,
    /// `source` was generated from `exact`.
    pub source_manufactured: bool,
    pub boundary: ScalarFn,
    pub exact: Option<ExactSolution>,
    pub slit: Option<SlitData>,
    pub notes: Vec<String>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("epsilon", &self.epsilon)
            .field("source_manufactured", &self.source_manufactured)
            .field("exact", &self.exact.is_some())
            .field("slit", &self.slit.as_ref().map(|s| s.segment))
            .finish()
    }
}

impl ProblemSpec {
    /// Problem whose source and boundary data come from a known solution.
    pub fn manufactured(
        name: impl Into<String>,
        epsilon: f64,
        beta: VectorFn,
        div_beta: ScalarFn,
        reaction: ScalarFn,
        exact: ExactSolution,
    ) -> Self {
        let source: ScalarFn = {
            let (beta, reaction, exact) = (beta.clone(), reaction.clone(), exact.clone());
            Arc::new(move |x| {
                let g = (exact.grad)(x);
                let b = beta(x);
                -epsilon * (exact.laplacian)(x) + b[0] * g[0] + b[1] * g[1] + reaction(x) * (exact.u)(x)
            })
        };
        ProblemSpec {
            name: name.into(),
            epsilon,
            beta,
            div_beta,
            reaction,
            source,
            source_manufactured: true,
            boundary: exact.u.clone(),
            exact: Some(exact),
            slit: None,
            notes: Vec::new(),
        }
    }

    /// Largest relative mismatch of `f` against `-εΔu + β·∇u + cu` over
    /// `points`; `None` without an exact solution.
    pub fn manufactured_residual(&self, points: &[Point]) -> Option<f64> {
        let exact = self.exact.as_ref()?;
        let mut worst: f64 = 0.0;
        for &x in points {
            let g = (exact.grad)(x);
            let b = (self.beta)(x);
            let terms = [
                -self.epsilon * (exact.laplacian)(x),
                b[0] * g[0] + b[1] * g[1],
                (self.reaction)(x) * (exact.u)(x),
            ];
            let lhs: f64 = terms.iter().sum();
            let scale = terms.iter().map(|t| t.abs()).fold(1e-300, f64::max);
            worst = worst.max(((self.source)(x) - lhs).abs() / scale);
        }
        Some(worst)
    }

    /// Counts quadrature points where `c - ½ ∇·β < -1e-12` and logs a warning
    /// when there are any.
    pub fn assumption_violations(&self, disc: &Discretization) -> usize {
        let rule = triangle_rule(crate::fem::assembly_degree(disc.k())).expect("supported degree");
        let mut count = 0;
        let mut worst = 0.0f64;
        for t in 0..disc.mesh.num_triangles() {
            let map = disc.map(t);
            for &xh in &rule.points {
                let x = map.to_physical(xh);
                let s = (self.reaction)(x) - 0.5 * (self.div_beta)(x);
                if s < -1e-12 {
                    count += 1;
                    worst = worst.min(s);
                }
            }
        }
        if count > 0 {
            log::warn!(
                "problem '{}': c - div(beta)/2 is negative at {count} quadrature points (min {worst:e})",
                self.name
            );
        }
        count
    }
}
