//! Steady-state solver for the 2D compressible Euler equations on unstructured
//! triangular meshes.
//!
//! The spatial operator is a fifth-order finite-volume WENO reconstruction with
//! unequal-sized sub-stencils (one quartic, four linear) and a local
//! Lax-Friedrichs flux. Three fixed-point drivers march the cell averages to the
//! discrete steady state: forward-Euler Jacobi, TVD-RK3 Jacobi, and forward-Euler
//! Gauss-Seidel fast sweeping over eight centroid-distance orderings.
//!
//! Typical use:
//!
//! ```no_run
//! use sweepfv::{Case, Discretization, Driver, Mesh, SolverConfig};
//!
//! let mesh = Mesh::load("meshes/square58.mesh").unwrap();
//! let case = Case::from_id("euler_nosource").unwrap();
//! let disc = Discretization::new(mesh, case, Default::default()).unwrap();
//! let config = SolverConfig::new(Driver::FeFastSweep, 0.6, 1e-12);
//! let report = sweepfv::run_to_convergence(&disc, &config, disc.initial_field()).unwrap();
//! println!("{} iterations", report.iterations);
//! ```

pub mod error;
pub mod euler;
pub mod geom;
pub mod mesh;
pub mod output;
pub mod poly;
pub mod quadrature;
pub mod solver;
pub mod stencil;
pub mod study;
pub mod sweep;
pub mod weno;

pub use error::{Error, Result};
pub use euler::{BoundaryRule, Case, GasParams, Primitive, State};
pub use geom::Vec2;
pub use mesh::{BoundaryTag, CellGeometry, Mesh, Neighbor};
pub use solver::{
    run_to_convergence, AlphaMode, Discretization, Driver, IterationReport, SolverConfig,
};
pub use stencil::{Member, ReconstructionOperator, StencilSet};
pub use study::{accuracy_study, AccuracyTable};
pub use sweep::SweepOrderings;
pub use weno::WenoConfig;
