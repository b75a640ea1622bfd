//! `skinny-sem`: elliptic solves, conditioning sweeps and wind-tunnel runs on quad meshes.

mod expr;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skinny_sem::bench::{condition_bench, default_epsilons, BenchReport};
use skinny_sem::element::PdeCoefficients;
use skinny_sem::mesh::{order_interfaces, quality, read_mesh, MeshFile, QuadMesh};
use skinny_sem::navier_stokes::{max_divergence, max_speed, vorticity, FlowState, NsConfig, NsSolver, TunnelBoundary};
use skinny_sem::schur::{sample_solution, BcKind, SchurSystem};
use thiserror::Error;

use expr::{Expr, ParseError};
use output::{fmt17, write_fields};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Instability(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Format(_) => 4,
            CliError::Solver(_) => 5,
            CliError::Instability(_) => 6,
        }
    }
}

impl From<skinny_sem::Error> for CliError {
    fn from(e: skinny_sem::Error) -> Self {
        use skinny_sem::Error as E;
        let msg = e.to_string();
        match e {
            E::Io(_) => CliError::Io(msg),
            E::Format { .. } => CliError::Format(msg),
            E::Instability { .. } => CliError::Instability(msg),
            E::InvalidArgument(_) => CliError::Usage(msg),
            _ => CliError::Solver(msg),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "skinny-sem", version, about = "Spectral element solver for elliptic PDEs on quadrilateral meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an elliptic PDE on a mesh and sample the solution.
    Solve(SolveArgs),
    /// Condition numbers of the Poisson operator on collapsing quads.
    CondBench(BenchArgs),
    /// Run the projection scheme on a tagged tunnel mesh.
    NsRun(NsArgs),
    /// Print mesh counts, quality and interface bandwidth.
    MeshInfo(InfoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PdeKind {
    Poisson,
    Screened,
    General,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, value_enum, default_value_t = PdeKind::Poisson)]
    pde: PdeKind,
    /// Screening constant: `∇²u − k² u = f`.
    #[arg(long, default_value_t = 0.0)]
    k2: f64,
    /// Constant coefficients `a11,a12,a22,b1,b2,c` of
    /// `a11 u_xx + 2 a12 u_xy + a22 u_yy + b1 u_x + b2 u_y + c u` for `--pde general`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    /// Right-hand side `f(x, y)`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    rhs: String,
    /// Dirichlet data `g(x, y)`; defaults to `--exact` when given, else 0.
    #[arg(long, allow_hyphen_values = true)]
    bc: Option<String>,
    /// Exact solution, for error reporting.
    #[arg(long, allow_hyphen_values = true)]
    exact: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Comma-separated, descending; defaults to 1, 1e-1, …, 1e-12.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NsArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 1.667e-5)]
    dt: f64,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 50)]
    cadence: usize,
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    dealias: bool,
    /// Directory for frame files.
    #[arg(long, default_value = "frames")]
    out: PathBuf,
}

#[derive(Args)]
struct InfoArgs {
    #[arg(long)]
    mesh: PathBuf,
    /// Points per edge used for the Σ bandwidth bound.
    #[arg(long, default_value_t = 16)]
    n: usize,
}

fn load_mesh(path: &Path) -> CliResult<(MeshFile, QuadMesh)> {
    let file = read_mesh(path)?;
    let mesh = QuadMesh::from_file(&file)?;
    Ok((file, mesh))
}

fn pde_coefficients(args: &SolveArgs) -> CliResult<PdeCoefficients> {
    match args.pde {
        PdeKind::Poisson => Ok(PdeCoefficients::laplacian()),
        PdeKind::Screened => {
            if args.k2 < 0.0 || args.k2.is_nan() {
                return Err(CliError::Usage(format!("--k2 must be non-negative, got {}", args.k2)));
            }
            Ok(PdeCoefficients::screened(-args.k2))
        }
        PdeKind::General => {
            let c = args.coeffs.as_ref().ok_or_else(|| CliError::Usage("--pde general needs --coeffs".into()))?;
            if c.len() != 6 {
                return Err(CliError::Usage(format!("--coeffs takes 6 values, got {}", c.len())));
            }
            Ok(PdeCoefficients::constant(c[0], c[1], c[2], c[3], c[4], c[5]))
        }
    }
}

fn cmd_solve(args: SolveArgs) -> CliResult<()> {
    if args.n < 4 {
        return Err(CliError::Usage(format!("--n must be at least 4, got {}", args.n)));
    }
    let coeffs = pde_coefficients(&args)?;
    let (file, mesh) = load_mesh(&args.mesh)?;
    let f = Expr::parse(&args.rhs)?;
    let exact = args.exact.as_deref().map(Expr::parse).transpose()?;
    let g = match (&args.bc, &exact) {
        (Some(s), _) => Expr::parse(s)?,
        (None, Some(e)) => e.clone(),
        (None, None) => Expr::Num(0.0),
    };
    // edges tagged `neumann [flux]` take an outward-derivative condition
    let mut flux = vec![None; mesh.edges().len()];
    for tag in file.tags.iter().filter(|t| t.label == "neumann") {
        let e = mesh
            .find_edge(tag.vertices[0], tag.vertices[1])
            .ok_or_else(|| CliError::Format(format!("neumann tag on a non-edge {}-{}", tag.vertices[0] + 1, tag.vertices[1] + 1)))?;
        flux[e] = Some(tag.values.first().copied().unwrap_or(0.0));
    }
    let sys = SchurSystem::assemble(&mesh, &coeffs, args.n, |e| if flux[e].is_some() { BcKind::Neumann } else { BcKind::Dirichlet })?;
    let rhs = sys.rhs_from_functions(|x, y| f.eval(x, y), |e, x, y| flux[e].unwrap_or_else(|| g.eval(x, y)))?;
    let sol = sys.solve(&rhs)?;
    let samples = sample_solution(&mesh, &sol)?;
    println!("max-residual {}", fmt17(sys.residual(&rhs, &sol)?));
    if let Some(e) = &exact {
        let err = samples.iter().flatten().map(|&(x, y, u)| (u - e.eval(x, y)).abs()).fold(0.0, f64::max);
        println!("max-error {}", fmt17(err));
    }
    if let Some(out) = &args.out {
        let fields: Vec<Vec<[f64; 3]>> = samples.iter().map(|el| el.iter().map(|&(x, y, u)| [x, y, u]).collect()).collect();
        write_fields(out, &args.mesh, args.n, &["x", "y", "u"], &fields)?;
    }
    Ok(())
}

fn cmd_cond_bench(args: BenchArgs) -> CliResult<()> {
    let eps = args.eps.unwrap_or_else(default_epsilons);
    let report: BenchReport = condition_bench(args.n, &eps)?;
    println!("n {}", report.n);
    println!("eps kappa_inf kappa_one");
    for i in 0..report.eps.len() {
        println!("{} {} {}", fmt17(report.eps[i]), fmt17(report.kappa_inf[i]), fmt17(report.kappa_one[i]));
    }
    if let Some(out) = &args.out {
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(out, text + "\n")?;
    }
    Ok(())
}

fn write_frame(dir: &Path, name: &str, mesh_path: &Path, mesh: &QuadMesh, state: &FlowState) -> CliResult<()> {
    let n = state.n();
    let omega = vorticity(mesh, state)?;
    let mut fields = Vec::with_capacity(mesh.num_elements());
    for j in 0..mesh.num_elements() {
        let u = state.u[j].to_values()?;
        let v = state.v[j].to_values()?;
        let p = state.p[j].to_values()?;
        let map = mesh.element(j).map();
        let grid = skinny_sem::ultra::cheb_points(n)?;
        let mut rows = Vec::with_capacity(n * n);
        for (ix, &r) in grid.points().iter().enumerate() {
            for (iy, &s) in grid.points().iter().enumerate() {
                let k = iy + n * ix;
                let [x, y] = map.map_point(r, s);
                rows.push([x, y, u[k], v[k], p[k], omega[j][k]]);
            }
        }
        fields.push(rows);
    }
    let header = format!("step {} t {}", state.step, fmt17(state.t));
    output::write_fields_with(&dir.join(name), mesh_path, n, &["x", "y", "u", "v", "p", "omega"], &fields, Some(&header))?;
    Ok(())
}

fn cmd_ns_run(args: NsArgs) -> CliResult<()> {
    if args.n < 4 {
        return Err(CliError::Usage(format!("--n must be at least 4, got {}", args.n)));
    }
    let (file, mesh) = load_mesh(&args.mesh)?;
    let boundary = TunnelBoundary::from_tags(&mesh, &file)?;
    let mut config = NsConfig::new(args.dt, args.steps)?;
    config.cadence = args.cadence;
    config.dealias = args.dealias;
    let solver = NsSolver::new(&mesh, args.n, config, boundary)?;
    std::fs::create_dir_all(&args.out)?;
    let mut last_good = FlowState::rest(mesh.num_elements(), args.n);
    let result = solver.run(
        last_good.clone(),
        |s| write_frame(&args.out, &format!("frame_{:06}.txt", s.step), &args.mesh, &mesh, s).map_err(to_core),
        |s| {
            last_good = s.clone();
            if s.step % 100 == 0 {
                let speed = max_speed(&s.u, &s.v)?;
                let div = max_divergence(&mesh, &s.u, &s.v)?;
                println!("step {} t {} max-speed {} max-divergence {}", s.step, fmt17(s.t), fmt17(speed), fmt17(div));
            }
            Ok(())
        },
    );
    match result {
        Ok(end) => {
            println!("completed {} steps, t {}", end.step, fmt17(end.t));
            Ok(())
        }
        Err(e) => {
            if matches!(e, skinny_sem::Error::Instability { .. }) {
                write_frame(&args.out, "frame_last_good.txt", &args.mesh, &mesh, &last_good)?;
            }
            Err(e.into())
        }
    }
}

fn to_core(e: CliError) -> skinny_sem::Error {
    match e {
        CliError::Io(m) => skinny_sem::Error::Io(m),
        other => skinny_sem::Error::InvalidArgument(other.to_string()),
    }
}

fn cmd_mesh_info(args: InfoArgs) -> CliResult<()> {
    let (_, mesh) = load_mesh(&args.mesh)?;
    let q = quality(&mesh)?;
    let ordering = order_interfaces(&mesh);
    println!("vertices {}", mesh.vertices().len());
    println!("edges {}", mesh.edges().len());
    println!("faces {}", mesh.num_elements());
    println!("boundary-edges {}", mesh.boundary_edges().count());
    println!("interior-edges {}", mesh.num_interior_edges());
    println!("skinniness-min {}", fmt17(q.min_skinniness()));
    println!("skinniness-median {}", fmt17(q.median_skinniness()));
    println!("interface-bandwidth {}", ordering.bandwidth);
    println!("sigma-bandwidth-bound {}", ordering.sigma_bandwidth(args.n));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::CondBench(a) => cmd_cond_bench(a),
        Command::NsRun(a) => cmd_ns_run(a),
        Command::MeshInfo(a) => cmd_mesh_info(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
