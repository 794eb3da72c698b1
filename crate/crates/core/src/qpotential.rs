//! Quantum potential of an amplitude, `V_Q = -(hbar^2 / 2m) lap R / R`, the total
//! potential `V + V_Q`, and the stationary-state check `V_Q + V - E = 0`.

use serde::{Deserialize, Serialize};

use crate::eigensolver::EigenSolution;
use crate::error::{domain, Error, Result};
use crate::fields::{laplacian, Field, MaskedField, Meaning};

/// Relative amplitude below which a point counts as a node.
pub const DEFAULT_NODE_TOL: f64 = 1e-6;

/// Particle mass and reduced Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    mass: f64,
    hbar: f64,
}

impl PhysParams {
    pub fn new(mass: f64, hbar: f64) -> Result<PhysParams> {
        if !(mass > 0.0 && mass.is_finite()) {
            return domain(format!("mass must be positive and finite, got {mass}"));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return domain(format!("hbar must be positive and finite, got {hbar}"));
        }
        Ok(PhysParams { mass, hbar })
    }

    /// `hbar = 1`.
    pub fn with_mass(mass: f64) -> Result<PhysParams> {
        PhysParams::new(mass, 1.0)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `hbar^2 / 2m`.
    pub fn kinetic_prefactor(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

/// Summary of `V_Q + V - E` over unmasked interior points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub max_residual: f64,
    pub rms_residual: f64,
    pub masked_fraction: f64,
    pub energy_used: f64,
    pub node_tolerance: f64,
}

/// `true` where `|R| >= node_tol * max|R|`.
pub fn node_mask(amplitude: &Field, node_tol: f64) -> Vec<bool> {
    let cut = node_tol * amplitude.max_abs();
    amplitude.values().iter().map(|v| v.abs() >= cut).collect()
}

/// Quantum potential with the default node tolerance.
pub fn quantum_potential(amplitude: &Field, p: &PhysParams) -> Result<MaskedField> {
    quantum_potential_with_tol(amplitude, p, DEFAULT_NODE_TOL)
}

/// Quantum potential at interior points; nodes (`|R| < node_tol * max|R|`),
/// endpoints and a radial origin are masked.
pub fn quantum_potential_with_tol(amplitude: &Field, p: &PhysParams, node_tol: f64) -> Result<MaskedField> {
    if amplitude.meaning() != Meaning::Amplitude {
        return domain("quantum potential expects an amplitude field");
    }
    if !(node_tol >= 0.0) {
        return domain(format!("node tolerance must be non-negative, got {node_tol}"));
    }
    if amplitude.max_abs() == 0.0 {
        return domain("amplitude is identically zero");
    }
    let lap = laplacian(amplitude)?;
    let k = p.kinetic_prefactor();
    let r = amplitude.values();
    let values: Vec<f64> = lap
        .values()
        .iter()
        .zip(r)
        .map(|(&l, &ri)| if ri != 0.0 { -k * l / ri } else { 0.0 })
        .collect();
    let values = values.into_iter().map(|v| if v.is_finite() { v } else { 0.0 }).collect();
    let mask: Vec<bool> = node_mask(amplitude, node_tol)
        .into_iter()
        .zip(lap.mask())
        .map(|(a, &b)| a && b)
        .collect();
    MaskedField::new(Field::new(*amplitude.grid(), values, Meaning::Potential)?, mask)
}

/// `V + V_Q` pointwise, mask of `V_Q` kept.
pub fn total_potential(v: &Field, v_q: &MaskedField) -> Result<MaskedField> {
    if !v.grid().same_lattice(v_q.grid()) {
        return Err(Error::GridMismatch("classical and quantum potentials live on different grids".into()));
    }
    let values = v.values().iter().zip(v_q.values()).map(|(a, b)| a + b).collect();
    MaskedField::new(Field::new(*v.grid(), values, Meaning::Potential)?, v_q.mask().to_vec())
}

/// Residual field `V_Q + V - E` of an amplitude claimed to be a stationary state
/// of `V` with energy `E`.
pub fn identity_residual_field(
    v: &Field,
    amplitude: &Field,
    energy: f64,
    p: &PhysParams,
    node_tol: f64,
) -> Result<MaskedField> {
    if !v.grid().same_lattice(amplitude.grid()) {
        return Err(Error::GridMismatch("amplitude and potential live on different grids".into()));
    }
    let v_q = quantum_potential_with_tol(amplitude, p, node_tol)?;
    Ok(total_potential(v, &v_q)?.map_values(|_, vt| vt - energy))
}

impl IdentityReport {
    /// Statistics over unmasked points of `residual` with coordinate in `[lo, hi]`.
    pub fn from_residual(residual: &MaskedField, energy: f64, node_tol: f64, window: Option<(f64, f64)>) -> IdentityReport {
        let grid = *residual.grid();
        let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        let in_window: Vec<usize> = (0..grid.len()).filter(|&i| (lo..=hi).contains(&grid.point(i))).collect();
        let (mut max, mut sq, mut count) = (0.0_f64, 0.0, 0usize);
        for &i in &in_window {
            if let Some(r) = residual.get(i) {
                max = max.max(r.abs());
                sq += r * r;
                count += 1;
            }
        }
        let rms = if count > 0 { (sq / count as f64).sqrt() } else { 0.0 };
        let masked_fraction = if in_window.is_empty() { 1.0 } else { 1.0 - count as f64 / in_window.len() as f64 };
        IdentityReport { max_residual: max, rms_residual: rms.min(max), masked_fraction, energy_used: energy, node_tolerance: node_tol }
    }
}

/// Checks `V_Q[R_n] = -V + E_n` for a solved eigenstate.
pub fn stationary_identity_residual(v: &Field, sol: &EigenSolution, p: &PhysParams, node_tol: f64) -> Result<IdentityReport> {
    stationary_identity_residual_within(v, sol, p, node_tol, None)
}

/// As [`stationary_identity_residual`], restricted to a coordinate window.
pub fn stationary_identity_residual_within(
    v: &Field,
    sol: &EigenSolution,
    p: &PhysParams,
    node_tol: f64,
    window: Option<(f64, f64)>,
) -> Result<IdentityReport> {
    let residual = identity_residual_field(v, &sol.amplitude, sol.energy, p, node_tol)?;
    Ok(IdentityReport::from_residual(&residual, sol.energy, node_tol, window))
}

/// Sign changes between consecutive unmasked samples; a masked run between
/// samples of opposite sign counts once.
pub fn node_count(amplitude: &Field, mask: &[bool]) -> usize {
    let mut count = 0;
    let mut last_sign = 0.0_f64;
    for (&v, &ok) in amplitude.values().iter().zip(mask) {
        if !ok || v == 0.0 {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            count += 1;
        }
        last_sign = s;
    }
    count
}
