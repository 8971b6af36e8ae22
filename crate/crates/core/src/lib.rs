//! Radially symmetric steady states, linearized spectra, bifurcation points
//! and asymptotic traveling-wave shapes for the reduced free-boundary
//! cell-motility model
//!
//! ```text
//! -ΔS + S = Λ e^{S - xV}  in Ω,   S = 0 on ∂Ω,
//! V ν_x = ∂S/∂ν - β κ + λ  on ∂Ω.
//! ```
//!
//! The crate is organized bottom-up:
//!
//! - [`numerics`]: quadrature, Bessel functions, shooting, mode solves, spectra.
//! - [`steady`]: the radial Liouville problem and its solution branch.
//! - [`spectral`]: σ tables, mode responses `h_l`, `φ̃`, `ψ_l` and the
//!   boundary-operator eigenvalues.
//! - [`bifurcation`]: the traveling-wave condition, its root, the Bessel
//!   comparison lemma and non-radial thresholds.
//! - [`wave`]: the third-order traveling-wave shape.
//! - [`io`] and [`cli`]: serialization and the command-line front end.

pub mod bifurcation;
pub mod cli;
pub mod error;
pub mod io;
pub mod numerics;
pub mod spectral;
pub mod steady;
pub mod wave;

pub use error::{Error, Result};
