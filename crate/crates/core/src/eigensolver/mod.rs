//! Bound states of `-(hbar^2/2m) lap psi + V psi = E psi` on a uniform grid, the
//! inverse map from a target quantum potential, and initial-value integration
//! of `R'' + (2m V_Q / hbar^2) R = 0`.
//!
//! The Hamiltonian is the 3-point stencil with Dirichlet ends. Radial problems
//! act on `u = r R`, which turns the s-wave Laplacian into the same 1D operator.
//! The `n`-th eigenvalue is bracketed by Sturm-count bisection and its vector
//! found by inverse iteration.

mod ode;
pub mod tridiag;

use serde::{Deserialize, Serialize};

pub use ode::integrate_amplitude_ode;
use tridiag::{bisect_eigenvalue, inverse_iteration, SymTridiagonal};

use crate::error::{domain, Error, Result};
use crate::fields::{normalize, Field, Grid, GridKind, Meaning};
use crate::qpotential::PhysParams;

/// Relative bracket width at which bisection stops.
pub const BRACKET_REL_TOL: f64 = 1e-12;
/// Inverse-iteration iteration cap and update tolerance.
pub const INVERSE_MAX_ITER: usize = 50;
pub const INVERSE_UPDATE_TOL: f64 = 1e-12;
/// Largest edge amplitude (relative to the peak) accepted on truncated domains.
pub const EDGE_DECAY_LIMIT: f64 = 1e-6;
/// Samples below this fraction of the peak are ignored when counting nodes.
const NODE_NOISE_FLOOR: f64 = 1e-10;

/// Meaning of the Dirichlet ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryChoice {
    /// Cartesian grid truncating the real line: the state must have decayed at
    /// both edges and lie below the smaller edge potential.
    DirichletBox,
    /// Cartesian grid whose ends are physical infinite walls; no decay or
    /// continuum checks.
    HardWall,
    /// Radial grid, `u(r_min) = 0`; the state must lie below `V(r_max)`.
    RadialRegular,
}

/// A solved bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub n: usize,
    pub energy: f64,
    /// `R_n`, unit norm under `dx` or `4 pi r^2 dr`.
    pub amplitude: Field,
    pub nodes: usize,
    pub geometry: GridKind,
    /// Bisection steps plus inverse-iteration solves.
    pub iterations: usize,
    pub energy_bracket_width: f64,
}

/// Serializable header of an [`EigenSolution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionHeader {
    pub n: usize,
    pub energy: f64,
    pub nodes: usize,
    pub geometry: GridKind,
    pub grid: GridDescriptor,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub kind: GridKind,
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub h: f64,
}

impl From<&Grid> for GridDescriptor {
    fn from(g: &Grid) -> Self {
        GridDescriptor { kind: g.kind(), x_min: g.x_min(), x_max: g.x_max(), n: g.len(), h: g.spacing() }
    }
}

impl EigenSolution {
    pub fn header(&self) -> SolutionHeader {
        SolutionHeader {
            n: self.n,
            energy: self.energy,
            nodes: self.nodes,
            geometry: self.geometry,
            grid: self.amplitude.grid().into(),
            iterations: self.iterations,
        }
    }
}

/// Solves for the `n`-th bound state of `v`.
pub fn solve_bound_state(v: &Field, n: usize, p: &PhysParams, bc: BoundaryChoice) -> Result<EigenSolution> {
    let grid = *v.grid();
    match (bc, grid.kind()) {
        (BoundaryChoice::RadialRegular, GridKind::Radial) => {}
        (BoundaryChoice::RadialRegular, GridKind::Cartesian) => return domain("radial_regular boundary needs a radial grid"),
        (_, GridKind::Radial) => return domain("radial grids take the radial_regular boundary"),
        _ => {}
    }
    let npts = grid.len();
    if npts < 3 {
        return domain("grid too small");
    }
    let h = grid.spacing();
    let k = p.kinetic_prefactor() / (h * h);
    let pot = v.values();
    let t = SymTridiagonal { diag: (1..npts - 1).map(|i| 2.0 * k + pot[i]).collect(), off: -k };
    if n >= t.len() {
        return Err(Error::NoBoundState { n, energy: f64::NAN, continuum: f64::NAN });
    }

    let bis = bisect_eigenvalue(&t, n, BRACKET_REL_TOL)?;
    let energy = bis.value;

    let continuum = match bc {
        BoundaryChoice::DirichletBox => Some(pot[0].min(pot[npts - 1])),
        BoundaryChoice::RadialRegular => Some(pot[npts - 1]),
        BoundaryChoice::HardWall => None,
    };
    if let Some(edge) = continuum {
        if energy >= edge {
            return Err(Error::NoBoundState { n, energy, continuum: edge });
        }
    }

    let inv = inverse_iteration(&t, energy, INVERSE_UPDATE_TOL, INVERSE_MAX_ITER);
    let mut u = Vec::with_capacity(npts);
    u.push(0.0);
    u.extend_from_slice(&inv.vector);
    u.push(0.0);

    let nodes = count_sign_changes(&u);
    if nodes != n {
        return Err(Error::NodeMismatch { expected: n, found: nodes });
    }

    orient(&mut u, n);
    let values = match grid.kind() {
        GridKind::Cartesian => u,
        GridKind::Radial => radial_amplitude(&grid, &u),
    };
    let amplitude = normalize(&Field::new(grid, values, Meaning::Amplitude)?)?;

    if bc == BoundaryChoice::DirichletBox {
        let a = amplitude.values();
        let edge = a[1].abs().max(a[npts - 2].abs()) / amplitude.max_abs();
        if edge > EDGE_DECAY_LIMIT {
            return Err(Error::DomainTooSmall { edge_amplitude: edge, limit: EDGE_DECAY_LIMIT });
        }
    }

    Ok(EigenSolution {
        n,
        energy,
        amplitude,
        nodes,
        geometry: grid.kind(),
        iterations: bis.iterations + inv.iterations,
        energy_bracket_width: bis.width,
    })
}

/// Amplitude whose quantum potential is `v_q_target + E_n`: the `n`-th bound
/// state of `-v_q_target`.
pub fn inverse_from_quantum_potential(
    v_q_target: &Field,
    n: usize,
    p: &PhysParams,
    bc: BoundaryChoice,
) -> Result<EigenSolution> {
    let confining = v_q_target.scaled(-1.0).with_meaning(Meaning::Potential);
    solve_bound_state(&confining, n, p, bc)
}

fn count_sign_changes(u: &[f64]) -> usize {
    let floor = NODE_NOISE_FLOOR * u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut last = 0.0_f64;
    let mut count = 0;
    for &v in u {
        if v.abs() <= floor {
            continue;
        }
        let s = v.signum();
        if last != 0.0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Ground state non-negative; excited states start positive at the left edge.
fn orient(u: &mut [f64], n: usize) {
    let peak = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let first = u.iter().copied().find(|v| v.abs() > NODE_NOISE_FLOOR * peak).unwrap_or(1.0);
    if first < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    if n == 0 {
        u.iter_mut().for_each(|v| *v = v.abs());
    }
}

/// `R = u / r`; at `r = 0` the value is extrapolated quadratically.
fn radial_amplitude(grid: &Grid, u: &[f64]) -> Vec<f64> {
    let mut r: Vec<f64> = (0..u.len())
        .map(|i| {
            let x = grid.point(i);
            if x > 0.0 {
                u[i] / x
            } else {
                0.0
            }
        })
        .collect();
    if grid.contains_origin() && r.len() >= 4 {
        r[0] = 3.0 * r[1] - 3.0 * r[2] + r[3];
    }
    r
}
