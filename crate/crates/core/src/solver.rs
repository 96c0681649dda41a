//! Residual operator, time step, fixed-point drivers and the convergence loop.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::{boundary_state, lax_friedrichs, lax_friedrichs_with, source_average, BoundaryRule, Case, State};
use crate::geom::{Isometry, Vec2};
use crate::mesh::{Mesh, Neighbor};
use crate::poly::MAX_COEFFS;
use crate::stencil::{Coeffs, GhostKind, Member, ReconstructionOperator, StencilSet};
use crate::sweep::{default_reference_points, SweepOrderings};
use crate::weno::WenoConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Driver {
    /// Forward Euler, all cells from the previous iterate.
    FeJacobi,
    /// Three-stage TVD Runge-Kutta, each stage a full Jacobi update.
    Rk3Jacobi,
    /// Forward Euler Gauss-Seidel over the eight alternating orderings.
    FeFastSweep,
}

impl Driver {
    pub const ALL: [Driver; 3] = [Driver::FeJacobi, Driver::Rk3Jacobi, Driver::FeFastSweep];

    pub fn name(self) -> &'static str {
        match self {
            Driver::FeJacobi => "fe_jacobi",
            Driver::Rk3Jacobi => "rk3_jacobi",
            Driver::FeFastSweep => "fe_fast_sweep",
        }
    }
}

impl fmt::Display for Driver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Driver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Driver> {
        match s {
            "fe" | "fe_jacobi" => Ok(Driver::FeJacobi),
            "rk3" | "rk3_jacobi" => Ok(Driver::Rk3Jacobi),
            "sweep" | "fe_fast_sweep" => Ok(Driver::FeFastSweep),
            other => Err(Error::Config(format!("unknown driver '{other}'"))),
        }
    }
}

/// Dissipation coefficient of the Lax-Friedrichs flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaMode {
    /// Per quadrature point, from the two reconstructed states.
    #[default]
    Local,
    /// One value per update: the largest `|velocity| + c` over all cell averages.
    Global,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub driver: Driver,
    pub cfl: f64,
    /// Stop when `ResA ≤ delta`.
    pub delta: f64,
    /// Iteration budget (one full-field update or one directional sweep each).
    pub max_iterations: usize,
    /// Overrides the bounding-box corners.
    pub reference_points: Option<[Vec2; 4]>,
    pub alpha: AlphaMode,
    /// A run whose `ResA` exceeds this is declared divergent.
    pub divergence_threshold: f64,
}

impl SolverConfig {
    pub fn new(driver: Driver, cfl: f64, delta: f64) -> SolverConfig {
        SolverConfig {
            driver,
            cfl,
            delta,
            max_iterations: 200_000,
            reference_points: None,
            alpha: AlphaMode::Local,
            divergence_threshold: 1e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0) {
            return Err(Error::Config(format!("CFL must be positive, got {}", self.cfl)));
        }
        if !(self.delta > 0.0) {
            return Err(Error::Config(format!("delta must be positive, got {}", self.delta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Outer {
    /// Neighbor cell and its basis at this edge's quadrature points.
    Cell(usize, [[f64; MAX_COEFFS]; 3]),
    Boundary(BoundaryRule),
}

/// Where a ghost cell's average comes from.
#[derive(Debug, Clone, Copy)]
enum GhostData {
    /// Exact-solution average.
    Fixed(State),
    /// The source cell's current state with momentum mapped by the matrix.
    Mirror(usize, [[f64; 2]; 2]),
}

#[derive(Debug, Clone)]
struct EdgeData {
    length: f64,
    normal: Vec2,
    points: [Vec2; 3],
    weights: [f64; 3],
    own: [[f64; MAX_COEFFS]; 3],
    outer: Outer,
}

/// Everything about the spatial discretization that is fixed for a mesh and case.
#[derive(Debug, Clone)]
pub struct Discretization {
    mesh: Mesh,
    case: Case,
    weno: WenoConfig,
    stencils: StencilSet,
    operator: ReconstructionOperator,
    ghosts: Vec<GhostData>,
    sources: Vec<State>,
    initial: Vec<State>,
    edges: Vec<[EdgeData; 3]>,
}

fn dot(c: &[f64; MAX_COEFFS], b: &[f64; MAX_COEFFS]) -> f64 {
    c.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn eval_state(coeffs: &Coeffs<4>, basis: &[f64; MAX_COEFFS]) -> State {
    State(std::array::from_fn(|k| dot(&coeffs[k], basis)))
}

impl Discretization {
    pub fn new(mesh: Mesh, case: Case, weno: WenoConfig) -> Result<Discretization> {
        weno.validate()?;
        case.check_mesh(&mesh)?;
        let stencils = StencilSet::build_with(&mesh, weno.big_stencil);
        let operator = ReconstructionOperator::build(&mesh, &stencils, &weno)?;
        let ghosts = stencils
            .ghosts
            .iter()
            .map(|g| match g.kind {
                GhostKind::Exact => case.exact_average(&g.vertices).map(GhostData::Fixed).ok_or_else(|| {
                    Error::Config("ghost cells need an analytic solution".into())
                }),
                GhostKind::Fixed(tag) => match case.rule(tag)? {
                    BoundaryRule::Dirichlet(p) => Ok(GhostData::Fixed(p.to_conserved(&case.gas))),
                    _ => Ok(GhostData::Mirror(g.source, Isometry::IDENTITY.m)),
                },
                GhostKind::Mirror(m) => Ok(GhostData::Mirror(g.source, m)),
            })
            .collect::<Result<Vec<_>>>()?;
        let sources = (0..mesh.num_cells())
            .map(|i| source_average(&mesh, i, &case))
            .collect();
        let initial = (0..mesh.num_cells())
            .map(|i| case.initial_state(&mesh.cell_vertices(i)))
            .collect::<Result<Vec<_>>>()?;

        let mut edges = Vec::with_capacity(mesh.num_cells());
        for i in 0..mesh.num_cells() {
            let g = mesh.geometry(i);
            let frame = operator.cells[i].frame;
            let mut data = Vec::with_capacity(3);
            for k in 0..3 {
                let e = &g.edges[k];
                let points = e.quadrature.points;
                let outer = match mesh.neighbors(i)[k] {
                    Neighbor::Cell(j) => {
                        let fj = operator.cells[j].frame;
                        Outer::Cell(j, points.map(|p| fj.basis(p)))
                    }
                    Neighbor::Boundary(tag) => Outer::Boundary(case.rule(tag)?),
                };
                data.push(EdgeData {
                    length: e.length,
                    normal: e.normal,
                    points,
                    weights: e.quadrature.weights,
                    own: points.map(|p| frame.basis(p)),
                    outer,
                });
            }
            let [a, b, c]: [EdgeData; 3] = data.try_into().expect("three edges");
            edges.push([a, b, c]);
        }

        Ok(Discretization {
            mesh,
            case,
            weno,
            stencils,
            operator,
            ghosts,
            sources,
            initial,
            edges,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn case(&self) -> &Case {
        &self.case
    }

    pub fn stencils(&self) -> &StencilSet {
        &self.stencils
    }

    pub fn operator(&self) -> &ReconstructionOperator {
        &self.operator
    }

    pub fn weno(&self) -> &WenoConfig {
        &self.weno
    }

    pub fn num_cells(&self) -> usize {
        self.mesh.num_cells()
    }

    pub fn initial_field(&self) -> Vec<State> {
        self.initial.clone()
    }

    pub fn source_averages(&self) -> &[State] {
        &self.sources
    }

    /// Cell averages of the analytic solution, when the case has one.
    pub fn exact_averages(&self) -> Option<Vec<State>> {
        (0..self.num_cells())
            .map(|i| self.case.exact_average(&self.mesh.cell_vertices(i)))
            .collect()
    }

    fn member_average(&self, field: &[State], m: Member) -> [f64; 4] {
        match m {
            Member::Cell(c) => field[c].0,
            Member::Ghost(g) => match self.ghosts[g] {
                GhostData::Fixed(u) => u.0,
                GhostData::Mirror(c, m) => {
                    let [rho, mx, my, e] = field[c].0;
                    [rho, m[0][0] * mx + m[0][1] * my, m[1][0] * mx + m[1][1] * my, e]
                }
            },
        }
    }

    /// WENO-combined polynomial coefficients of cell `i`.
    pub fn reconstruct(&self, field: &[State], i: usize) -> Coeffs<4> {
        self.operator.cells[i].reconstruct(&self.weno, &field[i].0, |m| {
            self.member_average(field, m)
        })
    }

    pub fn reconstruct_all(&self, field: &[State]) -> Vec<Coeffs<4>> {
        (0..self.num_cells())
            .into_par_iter()
            .map(|i| self.reconstruct(field, i))
            .collect()
    }

    /// Reconstructed value of cell `i` at `point`.
    pub fn point_value(&self, field: &[State], i: usize, point: Vec2) -> State {
        let coeffs = self.reconstruct(field, i);
        eval_state(&coeffs, &self.operator.cells[i].frame.basis(point))
    }

    /// Global Lax-Friedrichs coefficient for `field`, if that mode is selected.
    pub fn alpha_for(&self, field: &[State], mode: AlphaMode) -> Result<Option<f64>> {
        match mode {
            AlphaMode::Local => Ok(None),
            AlphaMode::Global => {
                let mut alpha: f64 = 0.0;
                for (i, u) in field.iter().enumerate() {
                    let p = u.physical(&self.case.gas).map_err(|e| e.in_cell(i))?;
                    let c = (self.case.gas.gamma * p.p / p.rho).sqrt();
                    alpha = alpha.max(p.u.hypot(p.v) + c);
                }
                Ok(Some(alpha))
            }
        }
    }

    fn edge_flux(
        &self,
        i: usize,
        k: usize,
        own: &Coeffs<4>,
        outer: Option<&Coeffs<4>>,
        alpha: Option<f64>,
    ) -> Result<State> {
        let e = &self.edges[i][k];
        let gas = &self.case.gas;
        let mut acc = State::ZERO;
        for q in 0..3 {
            let inner = eval_state(own, &e.own[q]);
            let ext = match (&e.outer, outer) {
                (Outer::Cell(_, basis), Some(c)) => eval_state(c, &basis[q]),
                (Outer::Boundary(rule), _) => {
                    boundary_state(*rule, &inner, e.normal, e.points[q], &self.case)?
                }
                (Outer::Cell(..), None) => unreachable!("neighbor reconstruction missing"),
            };
            let f = match alpha {
                None => lax_friedrichs(&inner, &ext, e.normal, gas),
                Some(a) => lax_friedrichs_with(&inner, &ext, e.normal, a, gas),
            }
            .map_err(|err| err.in_cell(i))?;
            acc += f * e.weights[q];
        }
        Ok(acc * e.length)
    }

    /// `L_i` given a source of reconstructions for cell `i` and its neighbors.
    pub fn residual_with(
        &self,
        i: usize,
        recon: impl Fn(usize) -> Coeffs<4>,
        alpha: Option<f64>,
    ) -> Result<State> {
        let own = recon(i);
        let mut total = State::ZERO;
        for k in 0..3 {
            let outer = match self.edges[i][k].outer {
                Outer::Cell(j, _) => Some(recon(j)),
                Outer::Boundary(_) => None,
            };
            total += self.edge_flux(i, k, &own, outer.as_ref(), alpha)?;
        }
        Ok(total * (-1.0 / self.mesh.geometry(i).area) + self.sources[i])
    }

    /// `L_i` from the current field, reconstructing the cell and its neighbors afresh.
    pub fn residual(&self, field: &[State], i: usize) -> Result<State> {
        self.residual_with(i, |c| self.reconstruct(field, c), None)
    }

    fn residual_alpha(&self, field: &[State], i: usize, alpha: Option<f64>) -> Result<State> {
        self.residual_with(i, |c| self.reconstruct(field, c), alpha)
    }

    /// `L` for every cell, all reading the same field.
    pub fn residual_all(&self, field: &[State], alpha: Option<f64>) -> Result<Vec<State>> {
        let recon = self.reconstruct_all(field);
        (0..self.num_cells())
            .into_par_iter()
            .map(|i| self.residual_with(i, |c| recon[c], alpha))
            .collect()
    }

    /// Net flux through the domain boundary, `Σ_edges ∫ F̂·n ds`.
    pub fn boundary_flux(&self, field: &[State]) -> Result<State> {
        let mut total = State::ZERO;
        for i in 0..self.num_cells() {
            let own = self.reconstruct(field, i);
            for k in 0..3 {
                if let Outer::Boundary(_) = self.edges[i][k].outer {
                    total += self.edge_flux(i, k, &own, None, None)?;
                }
            }
        }
        Ok(total)
    }

    /// `Δt = CFL / max_i Σ_edges (|V_i·n| + c_i) |e| / (2|Δ_i|)` from cell averages.
    pub fn compute_dt(&self, field: &[State], cfl: f64) -> Result<f64> {
        let gas = &self.case.gas;
        let mut worst: f64 = 0.0;
        for (i, u) in field.iter().enumerate() {
            let p = u.physical(gas).map_err(|e| e.in_cell(i))?;
            let c = (gas.gamma * p.p / p.rho).sqrt();
            let g = self.mesh.geometry(i);
            let s: f64 = g
                .edges
                .iter()
                .map(|e| ((p.u * e.normal.x + p.v * e.normal.y).abs() + c) * e.length)
                .sum();
            worst = worst.max(s / (2.0 * g.area));
        }
        Ok(cfl / worst)
    }

    /// One forward-Euler Jacobi update.
    pub fn step_fe_jacobi(&self, field: &[State], dt: f64, alpha: Option<f64>) -> Result<Vec<State>> {
        let l = self.residual_all(field, alpha)?;
        Ok(field.iter().zip(&l).map(|(&u, &r)| u + r * dt).collect())
    }

    /// One TVD-RK3 step; every stage is a full Jacobi evaluation.
    pub fn step_rk3_jacobi(&self, field: &[State], dt: f64, alpha: Option<f64>) -> Result<Vec<State>> {
        let l0 = self.residual_all(field, alpha)?;
        let u1: Vec<State> = field.iter().zip(&l0).map(|(&u, &r)| u + r * dt).collect();
        let l1 = self.residual_all(&u1, alpha)?;
        let u2: Vec<State> = field
            .iter()
            .zip(&u1)
            .zip(&l1)
            .map(|((&u, &v), &r)| u * 0.75 + v * 0.25 + r * (0.25 * dt))
            .collect();
        let l2 = self.residual_all(&u2, alpha)?;
        Ok(field
            .iter()
            .zip(&u2)
            .zip(&l2)
            .map(|((&u, &v), &r)| u * (1.0 / 3.0) + v * (2.0 / 3.0) + r * (2.0 / 3.0 * dt))
            .collect())
    }

    /// One Gauss-Seidel sweep in the given order, updating `field` in place;
    /// each cell sees every value already updated in this sweep.
    pub fn sweep_fe_gs(
        &self,
        field: &mut [State],
        ordering: &[usize],
        dt: f64,
        alpha: Option<f64>,
    ) -> Result<()> {
        for (pos, &i) in ordering.iter().enumerate() {
            let r = self
                .residual_alpha(field, i, alpha)
                .map_err(|e| e.at_position(pos))?;
            field[i] = field[i] + r * dt;
        }
        Ok(())
    }
}

/// Mean absolute update rate over all cells and components.
pub fn residue_res_a(prev: &[State], next: &[State], dt: f64) -> f64 {
    let m = prev.len();
    let sum: f64 = prev
        .iter()
        .zip(next)
        .map(|(a, b)| (0..4).map(|k| ((b.0[k] - a.0[k]) / dt).abs()).sum::<f64>())
        .sum();
    sum / (4 * m) as f64
}

#[derive(Debug, Clone)]
pub struct IterationReport {
    pub driver: Driver,
    pub cfl: f64,
    /// One full-field update (or one directional sweep) per iteration.
    pub iterations: usize,
    /// `ResA` after each iteration.
    pub residues: Vec<f64>,
    /// Time step used by each iteration.
    pub dts: Vec<f64>,
    pub converged: bool,
    /// Why the run stopped without converging.
    pub failure: Option<String>,
    /// Wall-clock time of the iteration loop.
    pub seconds: f64,
    pub field: Vec<State>,
}

/// Iterate from `initial` until `ResA ≤ delta`, divergence, or the iteration budget.
///
/// Non-physical states and residues above the divergence threshold end the
/// run with `converged == false`; only invalid configurations return `Err`.
pub fn run_to_convergence(
    disc: &Discretization,
    config: &SolverConfig,
    initial: Vec<State>,
) -> Result<IterationReport> {
    config.validate()?;
    if initial.len() != disc.num_cells() {
        return Err(Error::Config(format!(
            "initial field has {} cells, mesh has {}",
            initial.len(),
            disc.num_cells()
        )));
    }
    let orderings = match config.driver {
        Driver::FeFastSweep => Some(SweepOrderings::build(
            disc.mesh(),
            config
                .reference_points
                .unwrap_or_else(|| default_reference_points(disc.mesh())),
        )),
        _ => None,
    };

    let mut report = IterationReport {
        driver: config.driver,
        cfl: config.cfl,
        iterations: 0,
        residues: Vec::new(),
        dts: Vec::new(),
        converged: false,
        failure: None,
        seconds: 0.0,
        field: initial,
    };
    let start = Instant::now();

    while report.iterations < config.max_iterations {
        let prev = &report.field;
        let step = (|| -> Result<(Vec<State>, f64)> {
            let dt = disc.compute_dt(prev, config.cfl)?;
            let alpha = disc.alpha_for(prev, config.alpha)?;
            let next = match config.driver {
                Driver::FeJacobi => disc.step_fe_jacobi(prev, dt, alpha)?,
                Driver::Rk3Jacobi => disc.step_rk3_jacobi(prev, dt, alpha)?,
                Driver::FeFastSweep => {
                    let order = orderings
                        .as_ref()
                        .expect("orderings built for sweeping")
                        .schedule(report.iterations);
                    let mut next = prev.clone();
                    disc.sweep_fe_gs(&mut next, order, dt, alpha)?;
                    next
                }
            };
            Ok((next, dt))
        })();
        let (next, dt) = match step {
            Ok(v) => v,
            Err(e) => {
                report.failure = Some(e.to_string());
                break;
            }
        };
        let res = residue_res_a(&report.field, &next, dt);
        report.iterations += 1;
        report.residues.push(res);
        report.dts.push(dt);
        report.field = next;
        if res <= config.delta {
            report.converged = true;
            break;
        }
        if !res.is_finite() || res > config.divergence_threshold {
            report.failure = Some(format!("diverged: ResA = {res:e}"));
            break;
        }
    }
    if !report.converged && report.failure.is_none() {
        report.failure = Some(format!(
            "iteration budget of {} exhausted",
            config.max_iterations
        ));
    }
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
