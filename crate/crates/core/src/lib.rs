//! Numerical toolkit for the ground state of trapped dilute Bose gases.
//!
//! The crate connects the many-body problem
//!
//! ```text
//! H = sum_i (-Δ_i + V(x_i)) + sum_{i<j} v(|x_i - x_j|)        (ħ = 2m = 1)
//! ```
//!
//! to its Gross–Pitaevskii (GP) approximation:
//!
//! * [`scattering`] solves the zero-energy two-body problem for the
//!   scattering length `a` and builds the nearest-neighbour pair factor,
//! * [`gp`] minimizes the GP functional on the whole trap and in a Neumann
//!   ball,
//! * [`homog`] evaluates the homogeneous-gas bounds,
//! * [`vmc`] estimates upper bounds on the many-body energy by Metropolis
//!   sampling of a GP-orbital × pair-factor trial state,
//! * [`boxmethod`] assembles the cell-partition lower bound.
//!
//! All lengths are in trap units and all energies in units of the trap
//! level spacing.

pub mod boxmethod;
pub mod error;
pub mod gp;
pub mod grid;
pub mod homog;
pub mod potential;
pub mod scattering;
pub mod spline;
pub mod stats;
pub mod vmc;

pub use error::{Error, Result};
pub use gp::{GpOptions, GpProblem, GpResult};
pub use potential::{PairPotential, TrapPotential};
pub use scattering::{PairFactor, ScatteringLength, ScatteringSolution};
