use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::fields::{Field, Grid, MaskedField, Meaning};
use crate::qpotential::PhysParams;

/// Relative modulus below which a point counts as a node of `Psi`.
pub const DEFAULT_PSI_NODE_TOL: f64 = 1e-6;

/// Complex wavefunction sampled on a grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    re: Vec<f64>,
    im: Vec<f64>,
    time: f64,
}

impl ComplexField {
    pub fn new(grid: Grid, re: Vec<f64>, im: Vec<f64>, time: f64) -> Result<ComplexField> {
        if re.len() != grid.len() || im.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} / {} components for a grid of {} points",
                re.len(),
                im.len(),
                grid.len()
            )));
        }
        if re.iter().chain(&im).any(|v| !v.is_finite()) || !time.is_finite() {
            return domain("complex field has non-finite entries");
        }
        Ok(ComplexField { grid, re, im, time })
    }

    pub fn from_values(grid: Grid, values: &[Complex64], time: f64) -> Result<ComplexField> {
        ComplexField::new(grid, values.iter().map(|z| z.re).collect(), values.iter().map(|z| z.im).collect(), time)
    }

    pub fn from_fn(grid: Grid, time: f64, f: impl Fn(f64) -> Complex64) -> Result<ComplexField> {
        let values: Vec<Complex64> = grid.points().map(f).collect();
        ComplexField::from_values(grid, &values, time)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn value(&self, i: usize) -> Complex64 {
        Complex64::new(self.re[i], self.im[i])
    }

    pub fn values(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        (0..self.len()).map(|i| self.value(i).norm()).fold(0.0, f64::max)
    }

    /// `int |Psi|^2 dmu`.
    pub fn norm_squared(&self) -> f64 {
        let rho = self.density();
        crate::fields::integrate(&rho)
    }

    /// `|Psi|^2` as a density field.
    pub fn density(&self) -> Field {
        let values = self.re.iter().zip(&self.im).map(|(a, b)| a * a + b * b).collect();
        Field::new(self.grid, values, Meaning::Density).expect("finite entries")
    }

    /// `e^{i theta} Psi`.
    pub fn with_global_phase(&self, theta: f64) -> ComplexField {
        let c = Complex64::from_polar(1.0, theta);
        let values: Vec<Complex64> = self.values().into_iter().map(|z| c * z).collect();
        ComplexField::from_values(self.grid, &values, self.time).expect("finite entries")
    }
}

/// `Psi = R e^{iS}` with `R = |Psi|` and `S` unwrapped by a left-to-right sweep.
///
/// Jumps larger than `pi` between consecutive unmasked samples are folded by
/// multiples of `2 pi`. `S` is masked where `|Psi| < node_tol * max|Psi|`.
pub fn polar_decompose(psi: &ComplexField, node_tol: f64) -> Result<(Field, MaskedField)> {
    let peak = psi.max_modulus();
    if peak == 0.0 {
        return domain("wavefunction is identically zero");
    }
    let n = psi.len();
    let cut = node_tol * peak;
    let mut r = Vec::with_capacity(n);
    let mut s = vec![0.0; n];
    let mut mask = vec![false; n];
    let mut prev: Option<f64> = None;
    for i in 0..n {
        let z = psi.value(i);
        let m = z.norm();
        r.push(m);
        if m < cut {
            continue;
        }
        let raw = (z.im + 0.0).atan2(z.re);
        let phase = match prev {
            None => raw,
            Some(p) => raw + 2.0 * PI * ((p - raw) / (2.0 * PI)).round(),
        };
        s[i] = phase;
        mask[i] = true;
        prev = Some(phase);
    }
    let amp = Field::new(psi.grid, r, Meaning::Amplitude)?;
    let phase = MaskedField::new(Field::new(psi.grid, s, Meaning::Generic)?, mask)?;
    Ok((amp, phase))
}

/// `R e^{iS}`; masked phase samples are taken as zero.
pub fn recompose(amp: &Field, phase: &MaskedField, time: f64) -> Result<ComplexField> {
    if !amp.grid().same_lattice(phase.grid()) {
        return Err(Error::GridMismatch("amplitude and phase live on different grids".into()));
    }
    let values: Vec<Complex64> = (0..amp.len())
        .map(|i| Complex64::from_polar(amp.values()[i], phase.get(i).unwrap_or(0.0)))
        .collect();
    ComplexField::from_values(*amp.grid(), &values, time)
}

/// Density, probability current and velocity field of a wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowFields {
    pub rho: Field,
    pub current: Field,
    /// `J / rho`, masked at nodes and endpoints.
    pub velocity: MaskedField,
}

/// `rho = |Psi|^2`, `J = (hbar/m) Im(Psi* dPsi)` with central differences
/// (one-sided at the ends), and `v = J / rho` where `|Psi|` is above the node
/// tolerance. On unmasked points `v` equals `(hbar/m) dS/dx` to second order.
pub fn flow_fields(psi: &ComplexField, p: &PhysParams) -> Result<FlowFields> {
    flow_fields_with_tol(psi, p, DEFAULT_PSI_NODE_TOL)
}

pub fn flow_fields_with_tol(psi: &ComplexField, p: &PhysParams, node_tol: f64) -> Result<FlowFields> {
    let n = psi.len();
    if n < 3 {
        return domain("flow fields need at least 3 points");
    }
    let h = psi.grid.spacing();
    let scale = p.hbar() / p.mass();
    let z = psi.values();
    let rho = psi.density();
    let mut current = vec![0.0; n];
    for i in 0..n {
        let dz = if i == 0 {
            (z[1] - z[0]) / h
        } else if i == n - 1 {
            (z[n - 1] - z[n - 2]) / h
        } else {
            (z[i + 1] - z[i - 1]) / (2.0 * h)
        };
        current[i] = scale * (z[i].conj() * dz).im;
    }
    let cut = node_tol * psi.max_modulus();
    let mut velocity = vec![0.0; n];
    let mut mask = vec![false; n];
    for i in 1..n - 1 {
        if z[i].norm() >= cut && rho.values()[i] > 0.0 {
            velocity[i] = current[i] / rho.values()[i];
            mask[i] = true;
        }
    }
    Ok(FlowFields {
        rho,
        current: Field::new(psi.grid, current, Meaning::Generic)?,
        velocity: MaskedField::new(Field::new(psi.grid, velocity, Meaning::Generic)?, mask)?,
    })
}

/// `d rho/dt + dJ/dx` at the middle snapshot: central in time over the two
/// neighbouring snapshots, central in space of the central-difference current.
/// Nodes and two points at each end are masked.
pub fn continuity_residual(snapshots: &[ComplexField], p: &PhysParams) -> Result<MaskedField> {
    continuity_residual_with_tol(snapshots, p, DEFAULT_PSI_NODE_TOL)
}

pub fn continuity_residual_with_tol(snapshots: &[ComplexField], p: &PhysParams, node_tol: f64) -> Result<MaskedField> {
    if snapshots.len() < 3 {
        return domain(format!("continuity residual needs at least 3 snapshots, got {}", snapshots.len()));
    }
    let grid = *snapshots[0].grid();
    if snapshots.iter().any(|s| !s.grid().same_lattice(&grid)) {
        return domain("snapshots live on different grids");
    }
    let dts: Vec<f64> = snapshots.windows(2).map(|w| w[1].time - w[0].time).collect();
    let dt = dts[0];
    if !(dt > 0.0) || dts.iter().any(|d| (d - dt).abs() > 1e-9 * dt.abs().max(1e-300)) {
        return domain("snapshot times must be strictly increasing with a uniform step");
    }
    let mid = snapshots.len() / 2;
    let (before, centre, after) = (&snapshots[mid - 1], &snapshots[mid], &snapshots[mid + 1]);
    let n = grid.len();
    if n < 5 {
        return domain("continuity residual needs at least 5 grid points");
    }
    let h = grid.spacing();
    let flow = flow_fields_with_tol(centre, p, node_tol)?;
    let rho_b = before.density();
    let rho_a = after.density();
    let j = flow.current.values();
    let cut = node_tol * centre.max_modulus();
    let mut out = vec![0.0; n];
    let mut mask = vec![false; n];
    for i in 2..n - 2 {
        let drho = (rho_a.values()[i] - rho_b.values()[i]) / (2.0 * dt);
        let div = (j[i + 1] - j[i - 1]) / (2.0 * h);
        out[i] = drho + div;
        mask[i] = centre.value(i).norm() >= cut;
    }
    MaskedField::new(Field::new(grid, out, Meaning::Generic)?, mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridKind;

    fn unit() -> PhysParams {
        PhysParams::new(1.0, 1.0).unwrap()
    }

    fn grid(a: f64, b: f64, h: f64) -> Grid {
        Grid::with_spacing(GridKind::Cartesian, a, b, h).unwrap()
    }

    #[test]
    fn real_positive_has_zero_phase() {
        let g = grid(-3.0, 3.0, 0.01);
        let psi = ComplexField::from_fn(g, 0.0, |x| Complex64::new((-x * x).exp() + 0.1, 0.0)).unwrap();
        let (r, s) = polar_decompose(&psi, 1e-6).unwrap();
        assert!(s.valid().all(|(_, _, v)| v == 0.0));
        assert_eq!(r.values()[300], 1.1);
    }

    #[test]
    fn negative_real_gives_pi() {
        let g = grid(0.0, 1.0, 0.1);
        let psi = ComplexField::from_fn(g, 0.0, |_| Complex64::new(-1.0, 0.0)).unwrap();
        let (r, s) = polar_decompose(&psi, 1e-6).unwrap();
        assert!(r.values().iter().all(|&v| v == 1.0));
        assert!(s.valid().all(|(_, _, v)| v == PI));
    }

    #[test]
    fn plane_wave_phase_unwraps_linearly() {
        let g = grid(-5.0, 5.0, 0.01);
        let psi = ComplexField::from_fn(g, 0.0, |x| Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        let (r, s) = polar_decompose(&psi, 1e-6).unwrap();
        assert!(r.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let offset = s.values()[0] - 2.0 * g.x_min();
        assert!((offset / (2.0 * PI)).fract().abs() < 1e-12);
        for (_, x, v) in s.valid() {
            assert!((v - 2.0 * x - offset).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn zero_field_is_rejected() {
        let g = grid(0.0, 1.0, 0.1);
        let psi = ComplexField::from_fn(g, 0.0, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert!(matches!(polar_decompose(&psi, 1e-6), Err(Error::Domain(_))));
    }

    #[test]
    fn plane_wave_flow() {
        let g = grid(-2.0, 2.0, 1e-3);
        let psi = ComplexField::from_fn(g, 0.0, |x| Complex64::from_polar(1.0, 2.0 * x)).unwrap();
        let flow = flow_fields(&psi, &unit()).unwrap();
        assert!(flow.rho.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));
        // central differences give sin(kh)/h
        let j_exact = (2.0 * g.spacing()).sin() / g.spacing();
        for (i, _, v) in flow.velocity.valid() {
            assert!((v - j_exact).abs() < 1e-12);
            assert!((flow.current.values()[i] - j_exact).abs() < 1e-12);
            assert!((v - 2.0).abs() < 2e-6);
        }
    }

    #[test]
    fn current_is_density_times_velocity() {
        let g = grid(-6.0, 6.0, 0.01);
        let psi = ComplexField::from_fn(g, 0.0, |x| {
            Complex64::from_polar((-x * x / 4.0).exp(), 0.7 * x + 0.1 * x * x) + Complex64::new(0.2 * (-(x - 1.0).powi(2)).exp(), 0.0)
        })
        .unwrap();
        let flow = flow_fields(&psi, &unit()).unwrap();
        for (i, _, v) in flow.velocity.valid() {
            let j = flow.current.values()[i];
            let rv = flow.rho.values()[i] * v;
            assert!((j - rv).abs() <= 1e-10 * j.abs().max(1e-300) + 1e-300, "i = {i}");
        }
    }

    #[test]
    fn real_state_has_no_flow() {
        let g = grid(-5.0, 5.0, 0.01);
        let psi = ComplexField::from_fn(g, 0.0, |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
        let flow = flow_fields(&psi, &unit()).unwrap();
        assert!(flow.current.values().iter().all(|&j| j == 0.0));
        assert!(flow.velocity.valid().all(|(_, _, v)| v == 0.0));
    }

    #[test]
    fn continuity_needs_three_uniform_snapshots() {
        let g = grid(-1.0, 1.0, 0.1);
        let s = |t: f64| ComplexField::from_fn(g, t, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(continuity_residual(&[s(0.0), s(0.1)], &unit()).is_err());
        assert!(continuity_residual(&[s(0.0), s(0.1), s(0.3)], &unit()).is_err());
        let other = ComplexField::from_fn(grid(-1.0, 1.0, 0.05), 0.2, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(continuity_residual(&[s(0.0), s(0.1), other], &unit()).is_err());
    }

    #[test]
    fn polar_round_trip() {
        let g = grid(-4.0, 4.0, 0.01);
        let psi = ComplexField::from_fn(g, 0.3, |x| Complex64::new(x.cos(), (2.0 * x).sin() + 0.3)).unwrap();
        let (r, s) = polar_decompose(&psi, 1e-6).unwrap();
        let back = recompose(&r, &s, 0.3).unwrap();
        for (i, _, _) in s.valid() {
            assert!((back.value(i) - psi.value(i)).norm() < 1e-12);
        }
    }
}
