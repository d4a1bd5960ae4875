//! Benchmark problems on the unit square.
//!
//! * `smooth`: `β = [1, 1]`, `c = 0`, `u = sin(2πx) sin(2πy)`.
//! * `rotating`: `β = [y - 1/2, 1/2 - x]`, `c = 0`, `f = 0`, `g = 0` on the
//!   outer boundary and `u = sin²(2πy)` on the slit `{1/2} × [0, 1/2]`.
//! * `interior-layer`: `β = [1/2, √3/2]`, `c = 0`, `f = 0`, `g = 1` on the
//!   bottom edge and on `{x = 0, y <= 1/5}`, zero elsewhere.
//! * `boundary-layer`: `β = [1, 1]`, `c = 0`, exact solution with layers
//!   along `x = 1` and `y = 1`.
//! * `transport`: `ε = 0`, `β = [1, 1]`, `c = 1`, `u = sin(2πx) sin(2πy)`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::assembly::{ExactSolution, ProblemSpec, ScalarFn, SlitData, VectorFn};
use crate::mesh::SlitSpec;

use super::BenchError;

/// Catalog names with one-line descriptions.
pub const CATALOG: &[(&str, &str)] = &[
    ("smooth", "beta=[1,1], c=0, u=sin(2 pi x) sin(2 pi y)"),
    ("rotating", "beta=[y-1/2, 1/2-x], f=0, g=0, slit data sin^2(2 pi y) on x=1/2, 0<=y<=1/2"),
    ("interior-layer", "beta=[1/2, sqrt(3)/2], f=0, discontinuous boundary data"),
    ("boundary-layer", "beta=[1,1], c=0, exact solution with layers at x=1 and y=1"),
    ("transport", "eps=0, beta=[1,1], c=1, u=sin(2 pi x) sin(2 pi y)"),
];

/// Default diffusion coefficient per entry.
pub fn default_epsilon(name: &str) -> Option<f64> {
    match name {
        "smooth" | "interior-layer" => Some(1e-3),
        "rotating" => Some(1e-6),
        "boundary-layer" => Some(1e-2),
        "transport" => Some(0.0),
        _ => None,
    }
}

/// Optional replacements for constant coefficients. Manufactured sources are
/// regenerated after the replacement.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub beta: Option<[f64; 2]>,
    pub reaction: Option<f64>,
}

fn constant(v: f64) -> ScalarFn {
    Arc::new(move |_| v)
}

fn constant_vec(v: [f64; 2]) -> VectorFn {
    Arc::new(move |_| v)
}

/// `sin(2πx) sin(2πy)` with its gradient and Laplacian.
pub fn sine_product() -> ExactSolution {
    let w = 2.0 * PI;
    ExactSolution {
        u: Arc::new(move |p| (w * p[0]).sin() * (w * p[1]).sin()),
        grad: Arc::new(move |p| {
            [
                w * (w * p[0]).cos() * (w * p[1]).sin(),
                w * (w * p[0]).sin() * (w * p[1]).cos(),
            ]
        }),
        laplacian: Arc::new(move |p| -2.0 * w * w * (w * p[0]).sin() * (w * p[1]).sin()),
    }
}

/// Smooth part plus the layer quotient
/// `(e^{-1/ε} - e^{-(1-x)(1-y)/ε}) / (1 - e^{-1/ε})`.
pub fn layer_solution(eps: f64) -> ExactSolution {
    let a = (-1.0 / eps).exp();
    let d = 1.0 - a;
    let hp = PI / 2.0;
    let smooth = move |p: [f64; 2]| {
        let (s, t) = ((hp * p[0]).sin(), (hp * p[1]).sin());
        s + t * (1.0 - s)
    };
    let layer = move |p: [f64; 2]| (-(1.0 - p[0]) * (1.0 - p[1]) / eps).exp();
    ExactSolution {
        u: Arc::new(move |p| smooth(p) + (a - layer(p)) / d),
        grad: Arc::new(move |p| {
            let (s, t) = ((hp * p[0]).sin(), (hp * p[1]).sin());
            let (sx, ty) = (hp * (hp * p[0]).cos(), hp * (hp * p[1]).cos());
            let e = layer(p);
            [
                sx * (1.0 - t) - e * (1.0 - p[1]) / eps / d,
                ty * (1.0 - s) - e * (1.0 - p[0]) / eps / d,
            ]
        }),
        laplacian: Arc::new(move |p| {
            let (s, t) = ((hp * p[0]).sin(), (hp * p[1]).sin());
            let e = layer(p);
            let r2 = (1.0 - p[0]).powi(2) + (1.0 - p[1]).powi(2);
            -hp * hp * s * (1.0 - t) - hp * hp * t * (1.0 - s) - e * r2 / (eps * eps) / d
        }),
    }
}

fn require_positive(name: &str, eps: f64) -> Result<(), BenchError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(BenchError::IncompatibleEpsilon {
            problem: name.to_string(),
            epsilon: eps,
            reason: "requires a positive diffusion coefficient",
        });
    }
    Ok(())
}

/// Builds a catalog entry at diffusion coefficient `eps`.
pub fn get_problem(name: &str, eps: f64, overrides: &Overrides) -> Result<ProblemSpec, BenchError> {
    let beta_or = |b: [f64; 2]| constant_vec(overrides.beta.unwrap_or(b));
    let c_or = |c: f64| constant(overrides.reaction.unwrap_or(c));
    let mut spec = match name {
        "smooth" => {
            require_positive(name, eps)?;
            ProblemSpec::manufactured(name, eps, beta_or([1.0, 1.0]), constant(0.0), c_or(0.0), sine_product())
        }
        "boundary-layer" => {
            require_positive(name, eps)?;
            ProblemSpec::manufactured(name, eps, beta_or([1.0, 1.0]), constant(0.0), c_or(0.0), layer_solution(eps))
        }
        "transport" => {
            if eps != 0.0 {
                return Err(BenchError::IncompatibleEpsilon {
                    problem: name.to_string(),
                    epsilon: eps,
                    reason: "is a pure transport problem and requires eps = 0",
                });
            }
            let mut p =
                ProblemSpec::manufactured(name, 0.0, beta_or([1.0, 1.0]), constant(0.0), c_or(1.0), sine_product());
            p.notes.push("boundary data enters only on the inflow part of the boundary".into());
            p
        }
        "rotating" => {
            require_positive(name, eps)?;
            if overrides.beta.is_some() {
                return Err(BenchError::Override {
                    problem: name.to_string(),
                    what: "beta",
                });
            }
            let beta: VectorFn = Arc::new(|p| [p[1] - 0.5, 0.5 - p[0]]);
            ProblemSpec {
                name: name.into(),
                epsilon: eps,
                beta,
                div_beta: constant(0.0),
                reaction: c_or(0.0),
                source: constant(0.0),
                source_manufactured: false,
                boundary: constant(0.0),
                exact: None,
                slit: Some(SlitData {
                    segment: SlitSpec {
                        start: [0.5, 0.0],
                        end: [0.5, 0.5],
                    },
                    value: Arc::new(|p| (2.0 * PI * p[1]).sin().powi(2)),
                }),
                notes: vec!["closed streamlines: the flow admits no strictly decreasing potential along beta".into()],
            }
        }
        "interior-layer" => {
            require_positive(name, eps)?;
            let g: ScalarFn = Arc::new(|p| {
                let tol = 1e-12;
                if p[1].abs() <= tol || (p[0].abs() <= tol && p[1] <= 0.2 + tol) {
                    1.0
                } else {
                    0.0
                }
            });
            ProblemSpec {
                name: name.into(),
                epsilon: eps,
                beta: beta_or([0.5, 3f64.sqrt() / 2.0]),
                div_beta: constant(0.0),
                reaction: c_or(0.0),
                source: constant(0.0),
                source_manufactured: false,
                boundary: g,
                exact: None,
                slit: None,
                notes: vec!["boundary data is discontinuous at (0, 1/5) and (1, 0)".into()],
            }
        }
        _ => return Err(BenchError::UnknownProblem(name.to_string())),
    };
    if overrides.beta.is_some() || overrides.reaction.is_some() {
        spec.notes.push(format!("coefficients overridden: {overrides:?}"));
    }
    Ok(spec)
}
