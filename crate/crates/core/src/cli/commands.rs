use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::args::{Command, ForwardArgs, SolveArgs, SpecName, TrajectoryArgs, VerifyArgs};
use super::figures::figure_data;
use super::CliError;
use crate::analytic::{Family, ReferenceFamily};
use crate::bohm::{bohm_trajectories, write_trajectories_csv, PacketSpec, PlaneWave, StationaryState, WaveProvider};
use crate::eigensolver::{inverse_from_quantum_potential, solve_bound_state, BoundaryChoice, EigenSolution, SolutionHeader};
use crate::fields::{write_field_csv, write_masked_field_csv, Field, GridKind, Meaning, Table};
use crate::qpotential::{node_count, node_mask, quantum_potential_with_tol, stationary_identity_residual, PhysParams};

pub fn dispatch(cmd: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Figures(a) => {
            let data = figure_data(a)?;
            let out = a.out.clone().unwrap_or_else(|| PathBuf::from(format!("fig{}.csv", a.fig)));
            data.table.write_csv(create(&out)?)?;
            let side = out.with_extension("json");
            let mut w = create(&side)?;
            serde_json::to_writer_pretty(&mut w, &data.sidecar)?;
            writeln!(w)?;
            w.flush()?;
            writeln!(stdout, "{}", out.display())?;
            Ok(())
        }
        Command::Forward(a) => forward(a, stdout),
        Command::Solve(a) => {
            let (sol, _, _) = solve(a, false)?;
            emit_solution(&sol.header(), None, &sol, a.out.as_deref(), stdout)
        }
        Command::Inverse(a) => {
            let (sol, _, _) = solve(a, true)?;
            emit_solution(&sol.header(), Some(sol.energy), &sol, a.out.as_deref(), stdout)
        }
        Command::Verify(a) => verify(a, stdout),
        Command::Trajectories(a) => trajectories(a, stdout),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_column(path: &Path, column: &str, meaning: Meaning) -> Result<Field, CliError> {
    let table = Table::read_csv(open(path)?)?;
    let field = table.field(column, meaning)?;
    if field.valid_count() != field.len() {
        return Err(CliError::Usage(format!("column {column} of {} has empty cells", path.display())));
    }
    Ok(field.base().clone())
}

fn forward(a: &ForwardArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let p = PhysParams::new(a.m, a.hbar)?;
    let amp = read_column(&a.input, &a.column, Meaning::Amplitude)?;
    let vq = quantum_potential_with_tol(&amp, &p, a.node_tol)?;
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            write_masked_field_csv(&vq, &mut w)?;
            w.flush()?;
        }
        None => write_masked_field_csv(&vq, &mut *stdout)?,
    }
    Ok(())
}

/// Potential handed to the solver, the family (if any) and the boundary used.
fn solve(a: &SolveArgs, inverse: bool) -> Result<(EigenSolution, Field, Option<ReferenceFamily>), CliError> {
    let (input, fam, bc) = match &a.potential {
        Some(path) => {
            let f = read_column(path, &a.column, Meaning::Potential)?;
            let bc = a.bc.map(Into::into).unwrap_or(match f.grid().kind() {
                GridKind::Radial => BoundaryChoice::RadialRegular,
                GridKind::Cartesian => BoundaryChoice::DirichletBox,
            });
            (f, None, bc)
        }
        None => {
            let fam = a.physics.family(a.family)?;
            let h = a.grid.h.unwrap_or(0.005);
            let mut grid = fam.default_grid(h)?;
            if a.grid.x_min.is_some() || a.grid.x_max.is_some() {
                let lo = a.grid.x_min.unwrap_or(grid.x_min());
                let hi = a.grid.x_max.unwrap_or(grid.x_max());
                grid = crate::fields::Grid::with_spacing(grid.kind(), lo, hi, h)?;
            }
            let f = if inverse { fam.quantum_potential_field(&grid)? } else { fam.classical_potential_field(&grid)? };
            (f, Some(fam), a.bc.map(Into::into).unwrap_or(fam.boundary()))
        }
    };
    let p = match fam {
        Some(f) => f.params,
        None => PhysParams::new(a.physics.m.unwrap_or(1.0), a.physics.hbar)?,
    };
    let (sol, v) = if inverse {
        let sol = inverse_from_quantum_potential(&input, a.n, &p, bc)?;
        (sol, input.scaled(-1.0).with_meaning(Meaning::Potential))
    } else {
        (solve_bound_state(&input, a.n, &p, bc)?, input)
    };
    Ok((sol, v, fam))
}

#[derive(Serialize)]
struct SolveReport<'a> {
    #[serde(flatten)]
    header: &'a SolutionHeader,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_offset: Option<f64>,
}

fn emit_solution(
    header: &SolutionHeader,
    energy_offset: Option<f64>,
    sol: &EigenSolution,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if let Some(path) = out {
        let mut w = create(path)?;
        write_field_csv(&sol.amplitude, &mut w)?;
        w.flush()?;
    }
    serde_json::to_writer_pretty(&mut *stdout, &SolveReport { header, energy_offset })?;
    writeln!(stdout)?;
    Ok(())
}

fn verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (sol, v, fam) = solve(&a.solve, false)?;
    let p = match fam {
        Some(f) => f.params,
        None => PhysParams::new(a.solve.physics.m.unwrap_or(1.0), a.solve.physics.hbar)?,
    };
    let report = stationary_identity_residual(&v, &sol, &p, a.node_tol)?;
    serde_json::to_writer_pretty(&mut *stdout, &report)?;
    writeln!(stdout)?;
    let nodes = node_count(&sol.amplitude, &node_mask(&sol.amplitude, a.node_tol));
    if nodes != sol.n {
        return Err(CliError::Verification(format!("node mask counts {nodes} nodes, expected {}", sol.n)));
    }
    let tol = a.tol.unwrap_or(1e-3 * sol.energy.abs().max(1.0));
    if !(report.max_residual <= tol) {
        return Err(CliError::Verification(format!("max residual {:e} exceeds {tol:e}", report.max_residual)));
    }
    Ok(())
}

fn trajectories(a: &TrajectoryArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let p = PhysParams::new(a.m, a.hbar)?;
    let provider: Box<dyn WaveProvider> = match a.spec {
        SpecName::TwoGaussian => Box::new(PacketSpec::two_gaussian(a.offset.unwrap_or(4.0), a.sigma, p)?),
        SpecName::Single => Box::new(PacketSpec::single(a.offset.unwrap_or(0.0), a.sigma, a.k.unwrap_or(1.0), p)?),
        SpecName::PlaneWave => Box::new(PlaneWave { k: a.k.unwrap_or(2.0), params: p }),
        SpecName::Stationary => {
            let fam = ReferenceFamily::new(Family::Harmonic { omega: a.omega }, p)?;
            Box::new(StationaryState::harmonic(fam, a.n)?)
        }
    };
    let positions = a
        .positions
        .clone()
        .unwrap_or_else(|| [-1.5, -1.0, -0.5, 0.5, 1.0, 1.5].iter().map(|s| s * a.sigma).collect());
    let trajs = bohm_trajectories(provider.as_ref(), &positions, a.t_end, a.dt)?;
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            write_trajectories_csv(&trajs, &mut w)?;
            w.flush()?;
        }
        None => write_trajectories_csv(&trajs, &mut *stdout)?,
    }
    Ok(())
}
