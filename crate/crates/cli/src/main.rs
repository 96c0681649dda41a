//! `sweepfv` command-line front end.

mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sweepfv::{
    accuracy_study, output, run_to_convergence, Case, Discretization, Error, Mesh, SolverConfig,
    StencilSet, SweepOrderings,
};

use crate::config::RunConfig;

/// Exit statuses other than success and clap's usage error (2).
pub mod exit {
    pub const INPUT: u8 = 3;
    pub const IO: u8 = 4;
    pub const PHYSICS: u8 = 5;
    pub const NOT_CONVERGED: u8 = 6;
}

#[derive(Parser, Debug)]
#[command(name = "sweepfv", version, about = "Fifth-order WENO finite volume steady-state solver with fast sweeping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iterate one case to steady state and write the solution and residue history.
    Run(CommonArgs),
    /// Solve on a mesh and its uniform refinements and tabulate density errors.
    Accuracy(CommonArgs),
    /// Print the eight sweep orderings, one column each.
    Orderings(CommonArgs),
    /// Split every triangle into four and write the refined mesh.
    Refine(CommonArgs),
    /// Print the stencil membership of every cell.
    Stencils(CommonArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// fe, rk3 or sweep
    #[arg(long)]
    pub driver: Option<String>,
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long = "max-iters")]
    pub max_iters: Option<usize>,
    /// Uniform refinements applied to the mesh.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Output directory (run, accuracy) or file (refine).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// x1,y1,x2,y2,x3,y3,x4,y4
    #[arg(long = "ref-points")]
    pub ref_points: Option<String>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// WENO-Z epsilon (default 1e-6).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Minimum big-stencil size (default 16).
    #[arg(long = "big-stencil")]
    pub big_stencil: Option<usize>,
}

enum Failure {
    Lib(Error),
    NotConverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => exit::IO,
        Error::NonPhysical { .. } | Error::RankDeficient { .. } => exit::PHYSICS,
        _ => exit::INPUT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotConverged) => ExitCode::from(exit::NOT_CONVERGED),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    let (args, which) = match command {
        Command::Run(a) => (a, "run"),
        Command::Accuracy(a) => (a, "accuracy"),
        Command::Orderings(a) => (a, "orderings"),
        Command::Refine(a) => (a, "refine"),
        Command::Stencils(a) => (a, "stencils"),
    };
    let cfg = RunConfig::resolve(&args)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    match which {
        "run" => cmd_run(&cfg),
        "accuracy" => cmd_accuracy(&cfg),
        "orderings" => cmd_orderings(&cfg),
        "refine" => cmd_refine(&cfg),
        _ => cmd_stencils(&cfg),
    }
}

fn load_mesh(cfg: &RunConfig, levels: usize) -> Result<Mesh, Error> {
    let mut mesh = Mesh::load(cfg.mesh()?)?;
    for _ in 0..levels {
        mesh = mesh.refine_uniform()?;
    }
    Ok(mesh)
}

fn create(dir: &Path, name: &str) -> io::Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn solver_config(cfg: &RunConfig, case: &Case) -> SolverConfig {
    let mut sc = SolverConfig::new(cfg.driver, cfg.cfl, cfg.delta.unwrap_or(case.delta));
    if let Some(n) = cfg.max_iters {
        sc.max_iterations = n;
    }
    sc.reference_points = cfg.ref_points;
    sc
}

fn cmd_run(cfg: &RunConfig) -> Result<(), Failure> {
    let case = Case::from_id(&cfg.case)?;
    let mesh = load_mesh(cfg, cfg.levels.unwrap_or(0))?;
    let disc = Discretization::new(mesh, case.clone(), cfg.weno())?;
    let sc = solver_config(cfg, &case);
    let report = run_to_convergence(&disc, &sc, disc.initial_field())?;

    let dir = cfg.out_dir();
    let mut vtk = create(&dir, "solution.vtk")?;
    output::write_vtk(&mut vtk, disc.mesh(), &report.field, &case.gas)?;
    vtk.flush()?;
    let mut csv = create(&dir, "residue.csv")?;
    output::write_residue_csv(&mut csv, &report)?;
    csv.flush()?;

    println!("{}", output::summary_line(&case.id, &report));
    match (&report.failure, report.converged) {
        (_, true) => Ok(()),
        (Some(why), false) => {
            eprintln!("not converged: {why}");
            Err(Failure::NotConverged)
        }
        (None, false) => Err(Failure::NotConverged),
    }
}

fn cmd_accuracy(cfg: &RunConfig) -> Result<(), Failure> {
    let case = Case::from_id(&cfg.case)?;
    let mesh = load_mesh(cfg, 0)?;
    let sc = solver_config(cfg, &case);
    let table = accuracy_study(&mesh, &case, cfg.weno(), &sc, cfg.levels.unwrap_or(3))?;
    print!("{table}");
    if let Some(dir) = &cfg.out {
        let mut f = create(dir, "accuracy.txt")?;
        write!(f, "{table}")?;
        f.flush()?;
    }
    if table.rows.iter().all(|r| r.converged) {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn cmd_orderings(cfg: &RunConfig) -> Result<(), Failure> {
    let mesh = load_mesh(cfg, cfg.levels.unwrap_or(0))?;
    let refs = cfg
        .ref_points
        .unwrap_or_else(|| sweepfv::sweep::default_reference_points(&mesh));
    print!("{}", SweepOrderings::build(&mesh, refs).dump());
    Ok(())
}

fn cmd_refine(cfg: &RunConfig) -> Result<(), Failure> {
    let mesh = load_mesh(cfg, cfg.levels.unwrap_or(1))?;
    match &cfg.out {
        Some(path) => mesh.save(path)?,
        None => print!("{}", mesh.to_text()),
    }
    Ok(())
}

fn cmd_stencils(cfg: &RunConfig) -> Result<(), Failure> {
    let mesh = load_mesh(cfg, cfg.levels.unwrap_or(0))?;
    print!("{}", StencilSet::build(&mesh).dump());
    Ok(())
}
