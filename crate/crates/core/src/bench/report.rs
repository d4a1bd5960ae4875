use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::fem::Discretization;

use super::norms::ErrorReport;
use super::study::{BcComparison, ConditionRow, Solution};
use super::BenchError;

pub const CONVERGENCE_HEADER: &str = "level,h,ndofs,e_L2,eoc_L2,e_grad,eoc_grad,e_stream,e_bdry";
pub const CONDITION_HEADER: &str = "level,h,ndofs,eps,lambda_min,lambda_max,kappa,kappa_ratio,method";
pub const COMPARE_HEADER: &str = "mode,ndofs,e_L2,e_grad,e_stream,e_bdry,overshoot";

fn num(v: f64) -> String {
    format!("{v:.6e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn convergence_csv(rows: &[ErrorReport]) -> String {
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.level,
            num(r.h),
            r.n_dofs,
            num(r.e_l2),
            opt(r.eoc_l2),
            num(r.e_grad),
            opt(r.eoc_grad),
            num(r.e_stream),
            num(r.e_bdry)
        );
    }
    s
}

pub fn condition_csv(rows: &[ConditionRow]) -> String {
    let mut s = String::from(CONDITION_HEADER);
    s.push('\n');
    for r in rows {
        let e = &r.estimate;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.level,
            num(r.h),
            r.n_dofs,
            num(r.epsilon),
            num(e.lambda_min),
            num(e.lambda_max),
            num(e.kappa),
            opt(r.level_ratio),
            e.method
        );
    }
    s
}

pub fn compare_csv(cmp: &BcComparison) -> String {
    let mut s = String::from(COMPARE_HEADER);
    s.push('\n');
    for m in [&cmp.weak, &cmp.strong] {
        let r = m.report.as_ref();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            m.mode,
            m.solution.n_dofs,
            opt(r.map(|r| r.e_l2)),
            opt(r.map(|r| r.e_grad)),
            opt(r.map(|r| r.e_stream)),
            opt(r.map(|r| r.e_bdry)),
            num(m.overshoot)
        );
    }
    s
}

/// Legacy ASCII VTK: `u_h` at every Lagrange node, `q_h` at cell centroids.
/// Cells are the mesh triangles over their vertex nodes.
pub fn vtk(disc: &Discretization, sol: &Solution, title: &str) -> String {
    let nodes = disc.dofmap.w_nodes();
    let nt = disc.mesh.num_triangles();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(s, "{}", title.replace('\n', " "));
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", nodes.len());
    for p in nodes {
        let _ = writeln!(s, "{} {} 0", num(p[0]), num(p[1]));
    }
    let _ = writeln!(s, "CELLS {} {}", nt, 4 * nt);
    for t in 0..nt {
        let d = disc.dofmap.w_dofs(t);
        let _ = writeln!(s, "3 {} {} {}", d[0], d[1], d[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        s.push_str("5\n");
    }
    let _ = writeln!(s, "POINT_DATA {}", nodes.len());
    s.push_str("SCALARS u double 1\nLOOKUP_TABLE default\n");
    for v in &sol.w {
        let _ = writeln!(s, "{}", num(*v));
    }
    let _ = writeln!(s, "CELL_DATA {nt}");
    s.push_str("VECTORS q double\n");
    for t in 0..nt {
        let q = if sol.q.is_empty() {
            [0.0; 2]
        } else {
            disc.eval_q(t, [1.0 / 3.0, 1.0 / 3.0], &sol.q).value
        };
        let _ = writeln!(s, "{} {} 0", num(q[0]), num(q[1]));
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), BenchError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|source| BenchError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, contents).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Fixed-width summary of a convergence table.
pub fn convergence_table(rows: &[ErrorReport]) -> String {
    let mut s = format!(
        "{:>5} {:>10} {:>8} {:>11} {:>6} {:>11} {:>6} {:>11} {:>6} {:>11}\n",
        "level", "h", "ndofs", "e_L2", "eoc", "e_grad", "eoc", "e_stream", "eoc", "e_bdry"
    );
    let e = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
    for r in rows {
        let _ = writeln!(
            s,
            "{:>5} {:>10.4e} {:>8} {:>11.4e} {:>6} {:>11.4e} {:>6} {:>11.4e} {:>6} {:>11.4e}",
            r.level,
            r.h,
            r.n_dofs,
            r.e_l2,
            e(r.eoc_l2),
            r.e_grad,
            e(r.eoc_grad),
            r.e_stream,
            e(r.eoc_stream),
            r.e_bdry
        );
    }
    s
}

pub fn condition_table(rows: &[ConditionRow]) -> String {
    let mut s = format!(
        "{:>5} {:>10} {:>8} {:>9} {:>11} {:>11} {:>11} {:>7} {:>9}\n",
        "level", "h", "ndofs", "eps", "lambda_min", "lambda_max", "kappa", "ratio", "method"
    );
    for r in rows {
        let e = &r.estimate;
        let _ = writeln!(
            s,
            "{:>5} {:>10.4e} {:>8} {:>9.1e} {:>11.4e} {:>11.4e} {:>11.4e} {:>7} {:>9}",
            r.level,
            r.h,
            r.n_dofs,
            r.epsilon,
            e.lambda_min,
            e.lambda_max,
            e.kappa,
            r.level_ratio.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into()),
            e.method.to_string()
        );
    }
    s
}
