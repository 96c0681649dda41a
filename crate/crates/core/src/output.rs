//! Solution and residue-history writers.

use std::io::{self, Write};

use crate::euler::{GasParams, State};
use crate::mesh::Mesh;
use crate::solver::IterationReport;

/// Legacy ASCII VTK unstructured grid with cell data `rho`, `u`, `v`, `p`.
pub fn write_vtk(mut w: impl Write, mesh: &Mesh, field: &[State], gas: &GasParams) -> io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "sweepfv solution")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", mesh.num_nodes())?;
    for p in mesh.nodes() {
        writeln!(w, "{:?} {:?} 0", p.x, p.y)?;
    }
    let m = mesh.num_cells();
    writeln!(w, "CELLS {} {}", m, 4 * m)?;
    for c in mesh.cells() {
        writeln!(w, "3 {} {} {}", c[0], c[1], c[2])?;
    }
    writeln!(w, "CELL_TYPES {m}")?;
    for _ in 0..m {
        writeln!(w, "5")?;
    }
    writeln!(w, "CELL_DATA {m}")?;
    let prims: Vec<_> = field.iter().map(|u| u.to_primitive(gas)).collect();
    let arrays: [(&str, fn(&crate::euler::Primitive) -> f64); 4] = [
        ("rho", |p| p.rho),
        ("u", |p| p.u),
        ("v", |p| p.v),
        ("p", |p| p.p),
    ];
    for (name, get) in arrays {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for p in &prims {
            writeln!(w, "{:?}", get(p))?;
        }
    }
    Ok(())
}

/// Residue history as CSV: `iter,resA,dt,cfl,driver`.
pub fn write_residue_csv(mut w: impl Write, report: &IterationReport) -> io::Result<()> {
    writeln!(w, "iter,resA,dt,cfl,driver")?;
    for (n, (res, dt)) in report.residues.iter().zip(&report.dts).enumerate() {
        writeln!(w, "{},{:e},{:e},{},{}", n + 1, res, dt, report.cfl, report.driver)?;
    }
    Ok(())
}

/// `case driver cfl iters seconds converged`
pub fn summary_line(case: &str, report: &IterationReport) -> String {
    format!(
        "{} {} {} {} {:.3} converged={}",
        case, report.driver, report.cfl, report.iterations, report.seconds, report.converged
    )
}
