//! Planar point-vortex dynamics with symplectic reduction and
//! reconstruction phases.
//!
//! The library covers the three-vortex problem (arbitrary nonzero
//! strengths) and the four-identical-vortex problem:
//!
//! - [`dynamics`]: N-vortex equations of motion and conserved quantities;
//! - [`jacobi`]: the canonical transformations reducing three vortices to a
//!   two-dimensional phase space (sphere or hyperboloid);
//! - [`reduced`]: the reduced Hamiltonian system and the connection 1-form;
//! - [`integrator`]: adaptive Runge-Kutta integration with dense output,
//!   periodic-orbit detection, and level-set period quadrature;
//! - [`phases`]: geometric, dynamic, and total reconstruction phases, each
//!   computed by independent methods;
//! - [`fourv`]: the DFT chart for four identical vortices;
//! - [`elliptic`]: exact elliptic-function periods for three identical
//!   vortices;
//! - [`cli`]: the batch command-line front end.

pub mod cli;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod fourv;
pub mod integrator;
pub mod jacobi;
pub mod phases;
pub mod plane;
pub mod reduced;

pub use dynamics::{PlanarState, Strengths};
pub use error::{Error, Result};
pub use integrator::{find_periodic_orbit, integrate, IntegratorConfig, PeriodicOrbit, Trajectory};
pub use phases::{
    dynamic_phase_closed_form, geometric_phase_area, geometric_phase_line, phase_report,
    total_phase_reconstruction, PhaseReport,
};
pub use plane::Vec2;
pub use reduced::ReducedContext;
