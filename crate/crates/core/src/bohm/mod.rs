//! Polar decomposition `Psi = R e^{iS}`, density, current and velocity, the
//! continuity residual, analytic wavefunction providers, and Bohmian
//! trajectories under `dx/dt = (hbar/m) dS/dx`.

mod provider;
mod trajectory;
mod wavefield;

pub use provider::{gaussian_packet, PacketComponent, PacketSpec, PlaneWave, StationaryState, WaveProvider, VELOCITY_FD_STEP};
pub use trajectory::{
    bohm_trajectories, newton_residual, newton_residual_fd, write_trajectories_csv, Trajectory, NEWTON_NODE_TOL,
    NODE_HALT_TOL,
};
pub use wavefield::{
    continuity_residual, continuity_residual_with_tol, flow_fields, flow_fields_with_tol, polar_decompose, recompose,
    ComplexField, FlowFields, DEFAULT_PSI_NODE_TOL,
};
