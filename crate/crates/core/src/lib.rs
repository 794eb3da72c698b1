#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Numerical laboratory for the Bohm quantum potential.
//!
//! * [`fields`]: grids, sampled fields, finite differences, quadrature, CSV.
//! * [`specfun`]: Airy and Hermite functions.
//! * [`qpotential`]: the forward map `R -> V_Q`, `V + V_Q`, and the stationary identity.
//! * [`eigensolver`]: bound states, the inverse map `V_Q -> R`, and initial-value integration.
//! * [`analytic`]: closed-form reference amplitudes, energies and potentials.
//! * [`bohm`]: polar decomposition, flow fields, continuity residual, trajectories.
//! * [`cli`]: the `bohmlab` command-line surface.

pub mod error;
pub mod fields;
pub mod specfun;
pub mod qpotential;
pub mod eigensolver;
pub mod analytic;
pub mod bohm;
pub mod cli;

pub use error::{Error, Result};
pub use qpotential::PhysParams;
