//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and input errors, 2 when a numerical
//! stage fails (CG stagnation, loss of positive definiteness).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::assembly::BcMode;
use crate::bench::catalog::default_epsilon;
use crate::bench::{self, report, BenchError, Overrides, Region, CATALOG};
use crate::mesh::{Mesh, MeshFormat};
use crate::solver::{CgOptions, Preconditioner, SpectralMethod, SpectralOptions};

#[derive(Debug, Parser)]
#[command(name = "lsfem", version, about = "Least-squares finite elements for convection-dominated diffusion")]
struct Cli {
    /// Worker threads for element assembly (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve once and write the solution as VTK.
    Solve(SolveArgs),
    /// Error table over a sequence of meshes.
    Convergence(ConvergenceArgs),
    /// Extreme eigenvalues and condition numbers over meshes and diffusion values.
    Condition(ConditionArgs),
    /// Weak against strong boundary treatment on one mesh.
    Compare(CompareArgs),
    /// Print the benchmark catalog.
    ListProblems,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeshFormatArg {
    Native,
    Triangle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpectralArg {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Catalog entry (see list-problems).
    #[arg(long, default_value = "smooth")]
    problem: String,
    /// Polynomial index k: flux in RT of order k+1, scalar in P(k+1).
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    k: u8,
    /// Replace a constant convection field, as "bx,by".
    #[arg(long, value_parser = parse_pair)]
    beta: Option<[f64; 2]>,
    /// Replace a constant reaction coefficient.
    #[arg(long)]
    reaction: Option<f64>,
}

#[derive(Debug, Args)]
struct MeshArgs {
    /// Cells per side of the generated mesh (of the first level for studies).
    #[arg(long, default_value_t = 8)]
    mesh_n: usize,
    /// Vertex jitter as a fraction of the cell size. Defaults to 0.15, or to
    /// 0 for problems with a slit so that it stays resolved.
    #[arg(long)]
    perturb: Option<f64>,
    /// Read the mesh from a file instead of generating one.
    #[arg(long)]
    mesh: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "native")]
    mesh_format: MeshFormatArg,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Relative residual target of conjugate gradients.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration cap (default 20 times the number of unknowns).
    #[arg(long)]
    maxit: Option<usize>,
    /// none, jacobi, ic or cholesky.
    #[arg(long, default_value = "jacobi")]
    precond: Preconditioner,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory.
    #[arg(long, env = "LSFEM_OUT_DIR", default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Diffusion coefficient (catalog default if omitted).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value = "weak")]
    bc: BcMode,
    #[command(flatten)]
    mesh: MeshArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Diffusion coefficient (catalog default if omitted).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value = "weak")]
    bc: BcMode,
    /// Number of meshes; each has twice the cells per side of the previous.
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Restrict the error integrals to "x0,y0,x1,y1".
    #[arg(long)]
    region: Option<Region>,
    #[command(flatten)]
    mesh: MeshArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct ConditionArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value = "weak")]
    bc: BcMode,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Comma-separated diffusion coefficients.
    #[arg(long, default_value = "1,1e-3,1e-9", value_delimiter = ',')]
    eps_list: Vec<f64>,
    /// Eigenvalue method; auto switches to iterative above 2000 unknowns.
    #[arg(long, value_enum, default_value = "auto")]
    spectral: SpectralArg,
    #[command(flatten)]
    mesh: MeshArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Diffusion coefficient (catalog default if omitted).
    #[arg(long)]
    eps: Option<f64>,
    /// Restrict the error integrals to "x0,y0,x1,y1".
    #[arg(long)]
    region: Option<Region>,
    #[command(flatten)]
    mesh: MeshArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b] => Ok([a, b]),
        _ => Err(format!("expected two comma-separated numbers, got '{s}'")),
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Bench(BenchError),
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        Failure::Bench(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Bench(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Bench(e) => write!(f, "{e}"),
        }
    }
}

/// Parses `args` (program name first), runs the workflow and returns the
/// process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(Failure::Usage(format!("--threads {n}: {e}"))),
        },
        None => execute(cli.command),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::ListProblems => Ok(list_problems()),
        Command::Solve(a) => solve(a),
        Command::Convergence(a) => convergence(a),
        Command::Condition(a) => condition(a),
        Command::Compare(a) => compare(a),
    }
}

fn list_problems() -> String {
    let mut s = String::new();
    for (name, desc) in CATALOG {
        let eps = default_epsilon(name).unwrap_or(f64::NAN);
        let _ = writeln!(s, "{name:<15} eps={eps:<8e} {desc}");
    }
    s
}

fn label(k: u8) -> String {
    format!("P{}", k + 1)
}

impl ProblemArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            beta: self.beta,
            reaction: self.reaction,
        }
    }

    fn epsilon(&self, eps: Option<f64>) -> Result<f64, Failure> {
        let e = eps
            .or_else(|| default_epsilon(&self.problem))
            .ok_or_else(|| Failure::Bench(BenchError::UnknownProblem(self.problem.clone())))?;
        if !(e.is_finite() && (0.0..=1.0).contains(&e)) {
            return Err(Failure::Usage(format!("--eps {e} outside [0, 1]")));
        }
        Ok(e)
    }

    fn problem(&self, eps: f64) -> Result<crate::assembly::ProblemSpec, Failure> {
        Ok(bench::get_problem(&self.problem, eps, &self.overrides())?)
    }
}

impl MeshArgs {
    fn perturb(&self, has_slit: bool) -> Result<f64, Failure> {
        let p = self.perturb.unwrap_or(if has_slit { 0.0 } else { 0.15 });
        if !(0.0..0.3).contains(&p) {
            return Err(Failure::Usage(format!("--perturb {p} outside [0, 0.3)")));
        }
        Ok(p)
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.mesh_n == 0 {
            return Err(Failure::Usage("--mesh-n must be at least 1".into()));
        }
        Ok(())
    }

    fn load(&self, path: &Path) -> Result<Mesh, Failure> {
        let fmt = match self.mesh_format {
            MeshFormatArg::Native => MeshFormat::Native,
            MeshFormatArg::Triangle => MeshFormat::TriangleNodeEle,
        };
        Ok(Mesh::load(path, fmt).map_err(BenchError::from)?)
    }

    fn single(&self, has_slit: bool) -> Result<Mesh, Failure> {
        self.validate()?;
        match &self.mesh {
            Some(p) => self.load(p),
            None => Ok(Mesh::generate_structured(self.mesh_n, self.perturb(has_slit)?).map_err(BenchError::from)?),
        }
    }

    fn ladder(&self, levels: usize, has_slit: bool) -> Result<Vec<Mesh>, Failure> {
        self.validate()?;
        if levels == 0 {
            return Err(Failure::Usage("--levels must be at least 1".into()));
        }
        match &self.mesh {
            Some(p) => Ok(bench::refined_ladder(self.load(p)?, levels)),
            None => Ok(bench::mesh_ladder(self.mesh_n, levels, self.perturb(has_slit)?)?),
        }
    }

    fn describe(&self, mesh: &Mesh) -> String {
        match &self.mesh {
            Some(p) => format!("{} ({} triangles)", p.display(), mesh.num_triangles()),
            None => format!("generated n={} ({} triangles)", self.mesh_n, mesh.num_triangles()),
        }
    }
}

impl SolverArgs {
    fn options(&self) -> Result<CgOptions, Failure> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Failure::Usage(format!("--tol {} outside (0, 1)", self.tol)));
        }
        Ok(CgOptions {
            tol: self.tol,
            max_iter: self.maxit,
            precond: self.precond,
        })
    }
}

fn write(path: PathBuf, contents: &str, summary: &mut String) -> Result<(), Failure> {
    report::write_file(&path, contents)?;
    let _ = writeln!(summary, "wrote {}", path.display());
    Ok(())
}

fn solve(a: SolveArgs) -> Result<String, Failure> {
    let eps = a.problem.epsilon(a.eps)?;
    let cg = a.solver.options()?;
    let problem = a.problem.problem(eps)?;
    let mesh = a.mesh.single(problem.slit.is_some())?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {} eps={eps:e} bc={} mesh={}",
        problem.name,
        label(a.problem.k),
        a.bc,
        a.mesh.describe(&mesh)
    );
    for note in &problem.notes {
        let _ = writeln!(s, "note: {note}");
    }
    let disc = bench::discretize(&problem, mesh, a.problem.k as usize)?;
    let sol = bench::solve(&problem, &disc, a.bc, &cg)?;
    let _ = writeln!(
        s,
        "ndofs={} iterations={} residual={:.3e}",
        sol.n_dofs, sol.iterations, sol.residual
    );
    if problem.exact.is_some() {
        let r = bench::error_norms(&problem, &disc, &sol.q, &sol.w, None)?;
        let _ = writeln!(
            s,
            "e_L2={:.6e} e_grad={:.6e} e_stream={:.6e} e_bdry={:.6e}",
            r.e_l2, r.e_grad, r.e_stream, r.e_bdry
        );
    }
    let _ = writeln!(s, "overshoot={:.6e}", bench::overshoot(&disc, &sol.w, 0.0, 1.0));
    let title = format!("{} {} eps={eps:e} bc={}", problem.name, label(a.problem.k), a.bc);
    let file = a
        .out
        .out
        .join(format!("solve_{}_{}_{}.vtk", problem.name, label(a.problem.k), a.bc));
    write(file, &report::vtk(&disc, &sol, &title), &mut s)?;
    Ok(s)
}

fn convergence(a: ConvergenceArgs) -> Result<String, Failure> {
    let eps = a.problem.epsilon(a.eps)?;
    let cg = a.solver.options()?;
    let problem = a.problem.problem(eps)?;
    let meshes = a.mesh.ladder(a.levels, problem.slit.is_some())?;
    let rows = bench::convergence_study(&problem, a.problem.k as usize, a.bc, &meshes, a.region, &cg)?;
    let mut s = format!("{} {} eps={eps:e} bc={}", problem.name, label(a.problem.k), a.bc);
    if let Some(r) = a.region {
        let _ = write!(s, " region={r}");
    }
    s.push('\n');
    s.push_str(&report::convergence_table(&rows));
    let file = a
        .out
        .out
        .join(format!("convergence_{}_{}_{}.csv", problem.name, label(a.problem.k), a.bc));
    write(file, &report::convergence_csv(&rows), &mut s)?;
    Ok(s)
}

fn condition(a: ConditionArgs) -> Result<String, Failure> {
    if a.eps_list.is_empty() {
        return Err(Failure::Usage("--eps-list is empty".into()));
    }
    for &e in &a.eps_list {
        a.problem.epsilon(Some(e))?;
    }
    let has_slit = a.problem.problem(a.eps_list[0])?.slit.is_some();
    let meshes = a.mesh.ladder(a.levels, has_slit)?;
    let opts = SpectralOptions {
        method: match a.spectral {
            SpectralArg::Auto => None,
            SpectralArg::Dense => Some(SpectralMethod::Dense),
            SpectralArg::Iterative => Some(SpectralMethod::Iterative),
        },
        ..Default::default()
    };
    let rows = bench::condition_study(
        &a.problem.problem,
        &a.problem.overrides(),
        a.problem.k as usize,
        a.bc,
        &meshes,
        &a.eps_list,
        &opts,
    )?;
    let mut s = format!("{} {} bc={}\n", a.problem.problem, label(a.problem.k), a.bc);
    s.push_str(&report::condition_table(&rows));
    for level in 0..meshes.len() {
        let kappas: Vec<f64> = rows.iter().filter(|r| r.level == level).map(|r| r.estimate.kappa).collect();
        let max = kappas.iter().cloned().fold(f64::MIN, f64::max);
        let min = kappas.iter().cloned().fold(f64::MAX, f64::min);
        let _ = writeln!(s, "level {level}: max/min kappa over eps = {:.3}", max / min);
    }
    let file = a
        .out
        .out
        .join(format!("condition_{}_{}_{}.csv", a.problem.problem, label(a.problem.k), a.bc));
    write(file, &report::condition_csv(&rows), &mut s)?;
    Ok(s)
}

fn compare(a: CompareArgs) -> Result<String, Failure> {
    let eps = a.problem.epsilon(a.eps)?;
    let cg = a.solver.options()?;
    let problem = a.problem.problem(eps)?;
    let mesh = a.mesh.single(problem.slit.is_some())?;
    let mut s = format!(
        "{} {} eps={eps:e} mesh={}",
        problem.name,
        label(a.problem.k),
        a.mesh.describe(&mesh)
    );
    if let Some(r) = a.region {
        let _ = write!(s, " region={r}");
    }
    s.push('\n');
    let cmp = bench::compare_bc_modes(&problem, a.problem.k as usize, &mesh, a.region, &cg)?;
    let _ = writeln!(s, "{:>8} {:>8} {:>12} {:>12}", "mode", "ndofs", "e_L2", "overshoot");
    for m in [&cmp.weak, &cmp.strong] {
        let e = m
            .report
            .as_ref()
            .map(|r| format!("{:.4e}", r.e_l2))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{:>8} {:>8} {:>12} {:>12.4e}", m.mode, m.solution.n_dofs, e, m.overshoot);
    }
    if let Some(r) = cmp.ratio {
        let _ = writeln!(s, "weak/strong e_L2 ratio = {r:.4e}");
    }
    let file = a
        .out
        .out
        .join(format!("compare_{}_{}.csv", problem.name, label(a.problem.k)));
    write(file, &report::compare_csv(&cmp), &mut s)?;
    Ok(s)
}
