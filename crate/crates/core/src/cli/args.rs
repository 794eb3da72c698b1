use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::CliError;
use crate::analytic::{Family, ReferenceFamily};
use crate::eigensolver::BoundaryChoice;
use crate::qpotential::{PhysParams, DEFAULT_NODE_TOL};
use crate::specfun::AiryBranch;

#[derive(Debug, Parser)]
#[command(name = "bohmlab", version, about = "Bohm quantum-potential laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the data behind one of the four quantum-potential figures.
    Figures(FiguresArgs),
    /// Quantum potential of an amplitude read from CSV.
    Forward(ForwardArgs),
    /// Bound state of a classical potential.
    Solve(SolveArgs),
    /// Amplitude sourcing a target quantum potential.
    Inverse(SolveArgs),
    /// Check `V_Q + V - E = 0` for a solved eigenstate.
    Verify(VerifyArgs),
    /// Bohmian trajectories of an analytic wavefunction.
    Trajectories(TrajectoryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Harmonic,
    HydrogenS,
    Step,
    LinearAiry,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Ai,
    Bi,
}

impl From<BranchArg> for AiryBranch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Ai => AiryBranch::Ai,
            BranchArg::Bi => AiryBranch::Bi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    DirichletBox,
    HardWall,
    RadialRegular,
}

impl From<BoundaryArg> for BoundaryChoice {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::DirichletBox => BoundaryChoice::DirichletBox,
            BoundaryArg::HardWall => BoundaryChoice::HardWall,
            BoundaryArg::RadialRegular => BoundaryChoice::RadialRegular,
        }
    }
}

/// Physical constants; unset values fall back to the figure fiducials.
#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    /// Particle mass.
    #[arg(long)]
    pub m: Option<f64>,
    /// Reduced Planck constant.
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Oscillator frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Coulomb charge.
    #[arg(long = "e")]
    pub charge: Option<f64>,
    /// Step height.
    #[arg(long = "V0", alias = "v0")]
    pub v0: Option<f64>,
    /// Slope of the linear potential.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Box length.
    #[arg(long = "L", alias = "length")]
    pub length: Option<f64>,
    /// Airy branch of the linear family.
    #[arg(long, value_enum, default_value_t = BranchArg::Ai)]
    pub branch: BranchArg,
}

impl PhysicsArgs {
    pub fn family(&self, name: FamilyName) -> Result<ReferenceFamily, CliError> {
        let default_mass = if name == FamilyName::HydrogenS { 0.511 } else { 1.0 };
        let params = PhysParams::new(self.m.unwrap_or(default_mass), self.hbar)?;
        let family = match name {
            FamilyName::Harmonic => Family::Harmonic { omega: self.omega.unwrap_or(0.5) },
            FamilyName::HydrogenS => Family::HydrogenS { charge: self.charge.unwrap_or(1.0) },
            FamilyName::Step => Family::Step { v0: self.v0.unwrap_or(1.5) },
            FamilyName::LinearAiry => Family::LinearAiry { kappa: self.kappa.unwrap_or(0.1), branch: self.branch.into() },
            FamilyName::Box => Family::Box { length: self.length.unwrap_or(1.0) },
        };
        Ok(ReferenceFamily::new(family, params)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Grid spacing.
    #[arg(long)]
    pub h: Option<f64>,
    /// Left end (radial problems start at 0).
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    /// Right end, `r_max` on radial grids.
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    /// Figure number.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub fig: u8,
    /// Output CSV; the sidecar JSON is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ForwardArgs {
    /// Amplitude CSV with a leading `x` or `r` column.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Column holding the amplitude.
    #[arg(long, default_value = "value")]
    pub column: String,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = DEFAULT_NODE_TOL)]
    pub node_tol: f64,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Analytic family supplying the potential.
    #[arg(long, value_enum, default_value_t = FamilyName::Harmonic)]
    pub family: FamilyName,
    /// Potential CSV (`V` for solve, `V_Q` for inverse) replacing the family.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// Column of the potential CSV.
    #[arg(long, default_value = "value")]
    pub column: String,
    /// Quantum number.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Boundary treatment; defaults to the family's.
    #[arg(long, value_enum)]
    pub bc: Option<BoundaryArg>,
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Amplitude CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Largest accepted residual; default `1e-3 max(1, |E_n|)`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_NODE_TOL)]
    pub node_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpecName {
    TwoGaussian,
    Single,
    PlaneWave,
    Stationary,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    /// Wavefunction provider.
    #[arg(long, value_enum, default_value_t = SpecName::TwoGaussian)]
    pub spec: SpecName,
    /// Packet width.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Packet centres at `+-offset` (two_gaussian, default 4) or `offset` (single, default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub offset: Option<f64>,
    /// Wavenumber of the single packet (default 1) or plane wave (default 2).
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Oscillator frequency of the stationary provider.
    #[arg(long, default_value_t = 0.5)]
    pub omega: f64,
    /// Quantum number of the stationary provider.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Initial positions; default `+-{0.5, 1, 1.5} sigma`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub positions: Option<Vec<f64>>,
    #[arg(long, default_value_t = 8.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
