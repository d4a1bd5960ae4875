mod common;

use common::fem::{conformity_jumps, divergence_identity_defect, quadrature_defect};
use lsfem::fem::rt::local_edge_vertices;
use lsfem::fem::{edge_rule, triangle_rule, Discretization};
use lsfem::mesh::Point;
use lsfem::Mesh;
use proptest::prelude::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn quadrature_matches_monomial_oracle() {
    for degree in 0..=20usize {
        assert!(triangle_rule(degree).unwrap().weights.iter().all(|&w| w > 0.0));
        assert!(edge_rule(degree).unwrap().weights.iter().all(|&w| w > 0.0));
    }
    let defect = quadrature_defect(20);
    assert!(defect <= 1e-13, "{defect:e}");
}

/// Point on local edge `i` of triangle `t` at parameter `s`, in reference
/// coordinates, together with its physical position.
fn edge_point(disc: &Discretization, t: usize, i: usize, s: f64) -> ([f64; 2], Point) {
    let (a, b) = local_edge_vertices(i);
    let xh = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
    (xh, disc.map(t).to_physical(xh))
}

fn random_coeffs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()
}

#[test]
fn normal_traces_and_traces_are_continuous() {
    for k in 0..3 {
        let (q, w) = conformity_jumps(k, 3, 0.25);
        assert!(q <= 1e-11, "k={k}: normal trace jump {q:e}");
        assert!(w <= 1e-12, "k={k}: trace jump {w:e}");
    }
}

/// `∫_K div q = ∮_{∂K} q·n` for every local basis function, and the
/// pointwise divergence of the mapped field matches a central difference.
#[test]
fn piola_divergence_identity() {
    let mesh = Mesh::generate_structured(3, 0.25).unwrap();
    for k in 0..3 {
        let defect = divergence_identity_defect(k, &mesh);
        assert!(defect <= 1e-12, "k={k}: {defect:e}");
        let disc = Discretization::new(mesh.clone(), k, None).unwrap();
        for t in 0..disc.mesh.num_triangles() {
            let map = disc.map(t);
            let xh = [0.3, 0.25];
            let x = map.to_physical(xh);
            let hstep = 1e-5;
            let at = |p: Point| disc.q_basis(t, map.to_reference(p));
            let (xp, xm) = (at([x[0] + hstep, x[1]]), at([x[0] - hstep, x[1]]));
            let (yp, ym) = (at([x[0], x[1] + hstep]), at([x[0], x[1] - hstep]));
            for (i, s) in disc.q_basis(t, xh).iter().enumerate() {
                let fd = (xp[i].value[0] - xm[i].value[0] + yp[i].value[1] - ym[i].value[1]) / (2.0 * hstep);
                assert!((fd - s.div).abs() <= 1e-5 * s.div.abs().max(1.0));
            }
        }
    }
}

/// The largest over boundary elements and local flux functions of the two
/// inverse-inequality ratios.
fn inverse_constants(k: usize, n: usize) -> (f64, f64) {
    let mesh = Mesh::generate_structured(n, 0.0).unwrap();
    let disc = Discretization::new(mesh, k, None).unwrap();
    let rule = triangle_rule(2 * k + 4).unwrap();
    let erule = edge_rule(2 * k + 4).unwrap();
    let (mut c_trace, mut c_div): (f64, f64) = (0.0, 0.0);
    for t in 0..disc.mesh.num_triangles() {
        let edges = disc.topology.triangle_edges(t);
        if !edges.iter().any(|&e| disc.topology.is_boundary(e)) {
            continue;
        }
        let map = disc.map(t);
        let h = disc.topology.h_k(t);
        let nl = disc.dofmap.nq_local();
        let (mut l2, mut div, mut tr) = (vec![0.0; nl], vec![0.0; nl], vec![0.0; nl]);
        for (&xh, &w) in rule.points.iter().zip(&rule.weights) {
            for (i, s) in disc.q_basis(t, xh).iter().enumerate() {
                l2[i] += w * map.det() * (s.value[0].powi(2) + s.value[1].powi(2));
                div[i] += w * map.det() * s.div.powi(2);
            }
        }
        for (li, &e) in edges.iter().enumerate() {
            let Some(nrm) = disc.topology.outward_normal(e) else {
                continue;
            };
            let hf = disc.topology.h_f(e);
            for (&s, &w) in erule.points.iter().zip(&erule.weights) {
                let (xh, _) = edge_point(&disc, t, li, s[0]);
                for (i, q) in disc.q_basis(t, xh).iter().enumerate() {
                    tr[i] += w * hf * (q.value[0] * nrm[0] + q.value[1] * nrm[1]).powi(2);
                }
            }
        }
        for i in 0..nl {
            c_trace = c_trace.max((h * tr[i] / l2[i]).sqrt());
            c_div = c_div.max((h * h * div[i] / l2[i]).sqrt());
        }
    }
    (c_trace, c_div)
}

#[test]
fn inverse_inequality_constants_are_mesh_independent() {
    for k in 0..3 {
        let (t0, d0) = inverse_constants(k, 4);
        let (t1, d1) = inverse_constants(k, 8);
        assert!((t1 / t0 - 1.0).abs() <= 0.1, "k={k}: trace constant {t0} -> {t1}");
        assert!((d1 / d0 - 1.0).abs() <= 0.1, "k={k}: divergence constant {d0} -> {d1}");
    }
}

fn interpolation_error(k: usize, n: usize) -> f64 {
    let mesh = Mesh::generate_structured(n, 0.15).unwrap();
    let disc = Discretization::new(mesh, k, None).unwrap();
    let u = |p: Point| (2.0 * std::f64::consts::PI * p[0]).sin() * (2.0 * std::f64::consts::PI * p[1]).sin();
    let w = disc.interpolate_w(u);
    let rule = triangle_rule(2 * k + 8).unwrap();
    let mut e = 0.0;
    for t in 0..disc.mesh.num_triangles() {
        let map = disc.map(t);
        for (&xh, &wt) in rule.points.iter().zip(&rule.weights) {
            let d = u(map.to_physical(xh)) - disc.eval_u(t, xh, &w).0;
            e += wt * map.det() * d * d;
        }
    }
    e.sqrt()
}

#[test]
fn nodal_interpolation_converges_at_optimal_rate() {
    for k in 0..3 {
        let (e0, e1) = (interpolation_error(k, 16), interpolation_error(k, 32));
        let eoc = (e0 / e1).log2();
        assert!(eoc >= k as f64 + 1.8, "k={k}: eoc {eoc}");
    }
}

#[test]
fn lagrange_partition_of_unity_on_physical_elements() {
    let mesh = Mesh::generate_structured(2, 0.2).unwrap();
    for k in 0..3 {
        let disc = Discretization::new(mesh.clone(), k, None).unwrap();
        for t in 0..disc.mesh.num_triangles() {
            for xh in [[0.1, 0.2], [0.6, 0.3], [0.0, 1.0]] {
                let (v, g) = disc.w_basis(t, xh);
                assert!((v.iter().sum::<f64>() - 1.0).abs() <= 1e-13);
                let gs = g.iter().fold([0.0, 0.0], |a, b| [a[0] + b[0], a[1] + b[1]]);
                assert!(gs[0].abs() <= 1e-11 && gs[1].abs() <= 1e-11);
            }
        }
    }
}

fn poly_field(c: &[f64], deg: usize, p: Point) -> [f64; 2] {
    let mut out = [0.0; 2];
    let mut idx = 0;
    for total in 0..=deg {
        for a in 0..=total {
            let m = p[0].powi(a as i32) * p[1].powi((total - a) as i32);
            out[0] += c[idx] * m;
            out[1] += c[idx + 1] * m;
            idx += 2;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The flux interpolant reproduces vector polynomials of degree ≤ k + 1,
    /// which lie in the Raviart-Thomas space.
    #[test]
    fn flux_interpolation_reproduces_polynomials(k in 0usize..3, seed in 0u64..1000) {
        let deg = k + 1;
        let c = random_coeffs((deg + 1) * (deg + 2), seed);
        let mesh = Mesh::generate_structured(2, 0.2).unwrap();
        let disc = Discretization::new(mesh, k, None).unwrap();
        let qi = disc.interpolate_q(|p| poly_field(&c, deg, p));
        for t in 0..disc.mesh.num_triangles() {
            for xh in [[0.2, 0.3], [0.7, 0.1]] {
                let x = disc.map(t).to_physical(xh);
                let v = disc.eval_q(t, xh, &qi).value;
                let want = poly_field(&c, deg, x);
                prop_assert!((v[0] - want[0]).abs() <= 1e-10 && (v[1] - want[1]).abs() <= 1e-10);
            }
        }
    }

    /// Conformity holds for random jitter seeds and every degree.
    #[test]
    fn conformity_under_random_jitter(k in 0usize..3, n in 1usize..4, perturb in 0.0f64..0.29) {
        let (q, w) = conformity_jumps(k, n, perturb);
        prop_assert!(q <= 1e-11 && w <= 1e-12);
    }
}
