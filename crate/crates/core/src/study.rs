//! Mesh-refinement accuracy studies.

use std::fmt;

use crate::error::{Error, Result};
use crate::euler::{Case, State};
use crate::mesh::Mesh;
use crate::solver::{run_to_convergence, Discretization, SolverConfig};
use crate::weno::WenoConfig;

/// Errors below this are treated as round-off and get no order.
pub const ROUND_OFF: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub cells: usize,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub linf: f64,
    pub linf_order: Option<f64>,
    pub iterations: usize,
    pub seconds: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyTable {
    pub case: String,
    pub driver: String,
    pub cfl: f64,
    pub rows: Vec<AccuracyRow>,
}

/// Area-weighted L1 and max-norm errors of the density averages.
pub fn density_errors(mesh: &Mesh, field: &[State], exact: &[State]) -> (f64, f64) {
    let mut l1 = 0.0;
    let mut linf: f64 = 0.0;
    for i in 0..mesh.num_cells() {
        let e = (field[i].0[0] - exact[i].0[0]).abs();
        l1 += mesh.geometry(i).area * e;
        linf = linf.max(e);
    }
    (l1 / mesh.total_area(), linf)
}

/// `log2(coarse / fine)`, or `None` when either error is at round-off.
pub fn observed_order(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > ROUND_OFF && fine > ROUND_OFF).then(|| (coarse / fine).log2())
}

/// Solve on `base` and `levels` successive uniform refinements of it.
pub fn accuracy_study(
    base: &Mesh,
    case: &Case,
    weno: WenoConfig,
    config: &SolverConfig,
    levels: usize,
) -> Result<AccuracyTable> {
    let mut rows: Vec<AccuracyRow> = Vec::with_capacity(levels + 1);
    let mut mesh = base.clone();
    for level in 0..=levels {
        if level > 0 {
            mesh = mesh.refine_uniform()?;
        }
        let disc = Discretization::new(mesh.clone(), case.clone(), weno)?;
        let exact = disc
            .exact_averages()
            .ok_or_else(|| Error::Config(format!("case '{}' has no exact solution", case.id)))?;
        let report = run_to_convergence(&disc, config, disc.initial_field())?;
        let (l1, linf) = density_errors(&mesh, &report.field, &exact);
        let (l1_order, linf_order) = match rows.last() {
            Some(prev) => (observed_order(prev.l1, l1), observed_order(prev.linf, linf)),
            None => (None, None),
        };
        rows.push(AccuracyRow {
            cells: mesh.num_cells(),
            l1,
            l1_order,
            linf,
            linf_order,
            iterations: report.iterations,
            seconds: report.seconds,
            converged: report.converged,
        });
    }
    Ok(AccuracyTable {
        case: case.id.clone(),
        driver: config.driver.to_string(),
        cfl: config.cfl,
        rows,
    })
}

impl fmt::Display for AccuracyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = |o: Option<f64>| o.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"));
        writeln!(f, "# case={} driver={} cfl={}", self.case, self.driver, self.cfl)?;
        writeln!(
            f,
            "{:>8} {:>10} {:>6} {:>10} {:>6} {:>8} {:>10} {:>9}",
            "M", "L1", "order", "Linf", "order", "iter", "seconds", "converged"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>8} {:>10.2e} {:>6} {:>10.2e} {:>6} {:>8} {:>10.2} {:>9}",
                r.cells,
                r.l1,
                order(r.l1_order),
                r.linf,
                order(r.linf_order),
                r.iterations,
                r.seconds,
                r.converged
            )?;
        }
        Ok(())
    }
}
