use serde::Serialize;

use super::args::{FamilyName, FiguresArgs};
use super::CliError;
use crate::analytic::{Family, ReferenceFamily};
use crate::eigensolver::{integrate_amplitude_ode, inverse_from_quantum_potential, GridDescriptor};
use crate::fields::{Grid, GridKind, Table};
use crate::qpotential::DEFAULT_NODE_TOL;
use crate::specfun::AiryBranch;

/// Oscillator lengths kept on each side when solving Figure 1.
const HARMONIC_REACH: f64 = 12.0;
/// Bohr radii kept when solving Figure 2.
const COULOMB_REACH: f64 = 30.0;

/// Tolerances a consumer needs to check the emitted data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub node_tol: f64,
    /// `forward --node-tol roundtrip_node_tol` on the amplitude column
    /// reproduces `v_q + energy_offset` within `roundtrip` on unmasked rows.
    pub roundtrip: f64,
    pub roundtrip_node_tol: f64,
    /// Coordinates whose 3-point stencil straddles a jump of `v_q`.
    pub roundtrip_excluded: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Seed {
    pub x0: f64,
    pub r0: f64,
    pub dr0: f64,
}

/// Run metadata written next to a figure CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sidecar {
    pub command: String,
    pub params: ReferenceFamily,
    pub grid: GridDescriptor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve_grid: Option<GridDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_offset: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<AiryBranch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<Seed>,
    pub tolerances: Tolerances,
    pub library_version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub table: Table,
    pub sidecar: Sidecar,
}

fn window(args: &FiguresArgs, a: f64, b: f64, h: f64) -> Result<(f64, f64, f64), CliError> {
    let h = args.grid.h.unwrap_or(h);
    let a = args.grid.x_min.unwrap_or(a);
    let b = args.grid.x_max.unwrap_or(b);
    if !(h > 0.0) || !(b > a) {
        return Err(CliError::Usage(format!("invalid window [{a}, {b}] with h = {h}")));
    }
    Ok((a, b, h))
}

fn points(a: f64, b: f64, h: f64) -> usize {
    ((b - a) / h).round() as usize + 1
}

/// Emitted table and sidecar for figure `fig`.
pub fn figure_data(args: &FiguresArgs) -> Result<FigureData, CliError> {
    let version = env!("CARGO_PKG_VERSION").to_string();
    let command = format!("figures --fig {}", args.fig);
    let mut table = Table::new();
    let base_tol = Tolerances { node_tol: DEFAULT_NODE_TOL, roundtrip: 1e-6, roundtrip_node_tol: DEFAULT_NODE_TOL, roundtrip_excluded: vec![] };
    match args.fig {
        1 => {
            let fam = args.physics.family(FamilyName::Harmonic)?;
            let (a, b, h) = window(args, -6.0, 6.0, 0.01)?;
            let nw = points(a, b, h);
            let reach = HARMONIC_REACH * fam.length_scale();
            let left = ((a + reach) / h).ceil().max(0.0) as usize;
            let right = ((reach - b) / h).ceil().max(0.0) as usize;
            let solve_grid = Grid::from_start(GridKind::Cartesian, a - left as f64 * h, h, nw + left + right)?;
            let sol = inverse_from_quantum_potential(&fam.quantum_potential_field(&solve_grid)?, 0, &fam.params, fam.boundary())?;
            let amp = sol.amplitude.window(left, nw)?;
            let grid = Grid::from_start(GridKind::Cartesian, a, h, nw)?;
            let xs: Vec<f64> = grid.points().collect();
            table.push_dense("x", &xs);
            table.push_dense("v_q", &xs.iter().map(|&x| fam.reference_quantum_potential(x)).collect::<Vec<_>>());
            table.push_dense("r", amp.values());
            let sidecar = Sidecar {
                command,
                params: fam,
                grid: (&grid).into(),
                solve_grid: Some((&solve_grid).into()),
                energy_offset: Some(sol.energy),
                branch: None,
                seed: None,
                tolerances: base_tol,
                library_version: version,
            };
            Ok(FigureData { table, sidecar })
        }
        2 => {
            let fam = args.physics.family(FamilyName::HydrogenS)?;
            let (a, b, h) = window(args, 0.0, 20.0, 0.005)?;
            if a != 0.0 {
                return Err(CliError::Usage("figure 2 is radial and starts at r = 0".into()));
            }
            let r_max = (COULOMB_REACH * fam.length_scale()).max(b);
            let solve_grid = Grid::from_start(GridKind::Radial, 0.0, h, points(0.0, r_max, h))?;
            let sol = inverse_from_quantum_potential(&fam.quantum_potential_field(&solve_grid)?, 0, &fam.params, fam.boundary())?;
            let nw = points(0.0, b, h) - 1;
            let amp = sol.amplitude.window(1, nw)?;
            let grid = Grid::from_start(GridKind::Radial, h, h, nw)?;
            let rs: Vec<f64> = grid.points().collect();
            table.push_dense("r", &rs);
            table.push_dense("v_q", &rs.iter().map(|&r| fam.reference_quantum_potential(r)).collect::<Vec<_>>());
            table.push_dense("r_amp", amp.values());
            let sidecar = Sidecar {
                command,
                params: fam,
                grid: (&grid).into(),
                solve_grid: Some((&solve_grid).into()),
                energy_offset: Some(sol.energy),
                branch: None,
                seed: None,
                tolerances: base_tol,
                library_version: version,
            };
            Ok(FigureData { table, sidecar })
        }
        3 | 4 => {
            let (fam, (a, b, h)) = if args.fig == 3 {
                (args.physics.family(FamilyName::Step)?, window(args, -3.0, 3.0, 0.002)?)
            } else {
                (args.physics.family(FamilyName::LinearAiry)?, window(args, -20.0, 8.0, 0.005)?)
            };
            let grid = Grid::from_start(GridKind::Cartesian, a, h, points(a, b, h))?;
            let branch = match fam.family {
                Family::LinearAiry { branch, .. } => Some(branch),
                _ => None,
            };
            let x0 = match branch {
                Some(AiryBranch::Ai) => grid.x_min(),
                _ => {
                    let i0 = grid
                        .index_of(0.0)
                        .ok_or_else(|| CliError::Usage("the window must contain x = 0 on a grid point".into()))?;
                    grid.point(i0)
                }
            };
            let seed = Seed { x0, r0: fam.reference_amplitude(0, x0)?, dr0: fam.reference_slope(x0)? };
            let vq = fam.quantum_potential_field(&grid)?;
            let amp = integrate_amplitude_ode(&vq, seed.x0, seed.r0, seed.dr0, &fam.params)?;
            let xs: Vec<f64> = grid.points().collect();
            table.push_dense("x", &xs);
            table.push_dense("v_q", vq.values());
            table.push_dense("r", amp.values());
            let tolerances = if args.fig == 3 {
                Tolerances { roundtrip: 1e-5, roundtrip_excluded: vec![0.0], ..base_tol }
            } else {
                Tolerances { roundtrip: 1e-3, roundtrip_node_tol: 1e-3, ..base_tol }
            };
            let sidecar = Sidecar {
                command,
                params: fam,
                grid: (&grid).into(),
                solve_grid: None,
                energy_offset: None,
                branch,
                seed: Some(seed),
                tolerances,
                library_version: version,
            };
            Ok(FigureData { table, sidecar })
        }
        f => Err(CliError::Usage(format!("no figure {f}"))),
    }
}
