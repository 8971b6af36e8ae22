//! Shared numerical primitives: radial quadrature, modified Bessel functions,
//! the singular-origin shooting integrator, single-mode boundary value
//! problems and their Sturm–Liouville spectra, and bracketed root finding.

pub mod bessel;
pub mod grid;
pub mod ivp;
pub mod mode;
pub mod roots;
pub mod tridiag;

pub use bessel::{bessel_i, bessel_i0, bessel_i1, BesselOrder, J0_FIRST_ZERO, J1_FIRST_ZERO};
pub use grid::{integrate_radial, RadialFunction, RadialGrid, DEFAULT_NODES};
pub use ivp::{shoot_endpoint, solve_radial_ivp, IvpSolution};
pub use mode::{eig_sturm_liouville, solve_mode_bvp, BoundaryCondition, ModeKind, ModeSolution};
pub use roots::{find_root_bracketed, try_find_root_bracketed};
