use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::wavefield::ComplexField;
use crate::analytic::{Family, ReferenceFamily};
use crate::error::{domain, Result};
use crate::fields::Grid;
use crate::qpotential::PhysParams;

/// Step used for central differences when a provider has no analytic derivatives.
pub const VELOCITY_FD_STEP: f64 = 1e-5;

/// Analytic wavefunction `Psi(x, t)` for the trajectory layer.
pub trait WaveProvider {
    fn params(&self) -> PhysParams;

    fn psi(&self, x: f64, t: f64) -> Complex64;

    /// `(Psi, Psi', Psi'', Psi''')` in `x`, when available in closed form.
    fn derivatives(&self, _x: f64, _t: f64) -> Option<[Complex64; 4]> {
        None
    }

    /// `max |Psi(., t)|` or a close upper bound, used as the node reference.
    fn peak_modulus(&self, t: f64) -> f64;

    /// `dV/dx` of the classical potential.
    fn classical_force_gradient(&self, _x: f64) -> f64 {
        0.0
    }

    /// Guidance velocity `(hbar/m) Im(Psi'/Psi)`.
    fn velocity(&self, x: f64, t: f64) -> f64 {
        let p = self.params();
        let (z, dz) = match self.derivatives(x, t) {
            Some(d) => (d[0], d[1]),
            None => {
                let e = VELOCITY_FD_STEP;
                (self.psi(x, t), (self.psi(x + e, t) - self.psi(x - e, t)) / (2.0 * e))
            }
        };
        p.hbar() / p.mass() * (z.conj() * dz).im / z.norm_sqr()
    }

    fn sample(&self, grid: &Grid, t: f64) -> Result<ComplexField> {
        ComplexField::from_fn(*grid, t, |x| self.psi(x, t))
    }
}

/// One free Gaussian: centre `x_c`, width `sigma`, wavenumber `k` and weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketComponent {
    pub center: f64,
    pub sigma: f64,
    pub k: f64,
    pub weight: f64,
}

/// Superposition of freely spreading Gaussians, normalized on the real line.
///
/// Each component evolves as
/// `(2 pi sigma^2)^{-1/4} (1 + i tau)^{-1/2}
///  exp[-(x - x_c - v t)^2 / (4 sigma^2 (1 + i tau)) + i k (x - x_c) - i hbar k^2 t / 2m]`
/// with `tau = hbar t / (2 m sigma^2)` and `v = hbar k / m`, i.e. complex width
/// `sigma_t^2 = sigma^2 (1 + i tau)`. Free evolution is unitary, so the
/// normalization is fixed once from the `t = 0` overlaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    components: Vec<PacketComponent>,
    params: PhysParams,
    scale: f64,
}

impl PacketSpec {
    pub fn new(components: Vec<PacketComponent>, params: PhysParams) -> Result<PacketSpec> {
        if components.is_empty() {
            return domain("packet needs at least one component");
        }
        for c in &components {
            if !(c.sigma > 0.0 && c.sigma.is_finite()) {
                return domain(format!("packet width must be positive, got {}", c.sigma));
            }
            if !c.center.is_finite() || !c.k.is_finite() || !c.weight.is_finite() {
                return domain("packet parameters must be finite");
            }
        }
        if components.iter().all(|c| c.weight == 0.0) {
            return domain("packet weights are all zero");
        }
        let mut norm = 0.0;
        for a in &components {
            for b in &components {
                norm += a.weight * b.weight * overlap(a, b).re;
            }
        }
        if !(norm > 0.0) {
            return domain("packet superposition has zero norm");
        }
        Ok(PacketSpec { components, params, scale: 1.0 / norm.sqrt() })
    }

    pub fn single(center: f64, sigma: f64, k: f64, params: PhysParams) -> Result<PacketSpec> {
        PacketSpec::new(vec![PacketComponent { center, sigma, k, weight: 1.0 }], params)
    }

    /// Two equal packets at rest at `+-offset`.
    pub fn two_gaussian(offset: f64, sigma: f64, params: PhysParams) -> Result<PacketSpec> {
        let c = |center| PacketComponent { center, sigma, k: 0.0, weight: 1.0 };
        PacketSpec::new(vec![c(-offset), c(offset)], params)
    }

    pub fn components(&self) -> &[PacketComponent] {
        &self.components
    }

    fn component_terms(&self, c: &PacketComponent, x: f64, t: f64) -> (Complex64, Complex64, Complex64) {
        let p = self.params;
        let tau = p.hbar() * t / (2.0 * p.mass() * c.sigma * c.sigma);
        let v = p.hbar() * c.k / p.mass();
        let width = Complex64::new(1.0, tau) * (4.0 * c.sigma * c.sigma);
        let u = x - c.center - v * t;
        let phase = Complex64::new(0.0, c.k * (x - c.center) - p.hbar() * c.k * c.k * t / (2.0 * p.mass()));
        let pre = (2.0 * std::f64::consts::PI * c.sigma * c.sigma).powf(-0.25) / Complex64::new(1.0, tau).sqrt();
        let value = pre * (-(u * u) / width + phase).exp();
        let log_slope = -2.0 * u / width + Complex64::new(0.0, c.k);
        let curvature = -2.0 / width;
        (value, log_slope, curvature)
    }
}

/// `int g_a^* g_b dx` at `t = 0`.
fn overlap(a: &PacketComponent, b: &PacketComponent) -> Complex64 {
    let (sa2, sb2) = (a.sigma * a.sigma, b.sigma * b.sigma);
    let big_a = 0.25 / sa2 + 0.25 / sb2;
    let big_b = Complex64::new(a.center / (2.0 * sa2) + b.center / (2.0 * sb2), b.k - a.k);
    let big_c = Complex64::new(
        -a.center * a.center / (4.0 * sa2) - b.center * b.center / (4.0 * sb2),
        a.k * a.center - b.k * b.center,
    );
    let pre = (2.0 * std::f64::consts::PI).powf(-0.5) / (a.sigma * b.sigma).sqrt();
    pre * (std::f64::consts::PI / big_a).sqrt() * (big_b * big_b / (4.0 * big_a) + big_c).exp()
}

/// Normalized superposition at `(x, t)`, `t >= 0`.
pub fn gaussian_packet(spec: &PacketSpec, x: f64, t: f64) -> Result<Complex64> {
    if !(t >= 0.0) {
        return domain(format!("packet time must be non-negative, got {t}"));
    }
    Ok(spec.psi(x, t))
}

impl WaveProvider for PacketSpec {
    fn params(&self) -> PhysParams {
        self.params
    }

    fn psi(&self, x: f64, t: f64) -> Complex64 {
        let sum: Complex64 = self
            .components
            .iter()
            .map(|c| c.weight * self.component_terms(c, x, t).0)
            .sum();
        self.scale * sum
    }

    fn derivatives(&self, x: f64, t: f64) -> Option<[Complex64; 4]> {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for c in &self.components {
            let (g, l, b) = self.component_terms(c, x, t);
            let g = g * c.weight * self.scale;
            out[0] += g;
            out[1] += g * l;
            out[2] += g * (l * l + b);
            out[3] += g * (l * l * l + 3.0 * l * b);
        }
        Some(out)
    }

    /// `sum |w_j| |g_j|_max`, an upper bound on the superposition.
    fn peak_modulus(&self, t: f64) -> f64 {
        let p = self.params;
        self.scale
            * self
                .components
                .iter()
                .map(|c| {
                    let tau = p.hbar() * t / (2.0 * p.mass() * c.sigma * c.sigma);
                    c.weight.abs() * (2.0 * std::f64::consts::PI * c.sigma * c.sigma).powf(-0.25) * (1.0 + tau * tau).powf(-0.25)
                })
                .sum::<f64>()
    }
}

/// `e^{i(kx - hbar k^2 t / 2m)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub k: f64,
    pub params: PhysParams,
}

impl WaveProvider for PlaneWave {
    fn params(&self) -> PhysParams {
        self.params
    }

    fn psi(&self, x: f64, t: f64) -> Complex64 {
        let p = self.params;
        Complex64::from_polar(1.0, self.k * x - p.hbar() * self.k * self.k * t / (2.0 * p.mass()))
    }

    fn derivatives(&self, x: f64, t: f64) -> Option<[Complex64; 4]> {
        let z = self.psi(x, t);
        let ik = Complex64::new(0.0, self.k);
        Some([z, z * ik, z * ik * ik, z * ik * ik * ik])
    }

    fn peak_modulus(&self, _t: f64) -> f64 {
        1.0
    }

    fn velocity(&self, _x: f64, _t: f64) -> f64 {
        self.params.hbar() * self.k / self.params.mass()
    }
}

/// Harmonic eigenstate `R_n(x) e^{-i E_n t / hbar}` in its own potential.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryState {
    family: ReferenceFamily,
    omega: f64,
    n: usize,
    energy: f64,
    peak: f64,
}

impl StationaryState {
    pub fn harmonic(family: ReferenceFamily, n: usize) -> Result<StationaryState> {
        let Family::Harmonic { omega } = family.family else {
            return domain("stationary provider needs the harmonic family");
        };
        let energy = family.reference_energy(n)?;
        let grid = family.default_grid(1e-3 * family.length_scale())?;
        let mut peak = 0.0_f64;
        for x in grid.points() {
            peak = peak.max(family.reference_amplitude(n, x)?.abs());
        }
        Ok(StationaryState { family, omega, n, energy, peak })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    fn phase(&self, t: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.energy * t / self.family.params.hbar())
    }
}

impl WaveProvider for StationaryState {
    fn params(&self) -> PhysParams {
        self.family.params
    }

    fn psi(&self, x: f64, t: f64) -> Complex64 {
        self.family.reference_amplitude(self.n, x).unwrap_or(0.0) * self.phase(t)
    }

    fn derivatives(&self, x: f64, t: f64) -> Option<[Complex64; 4]> {
        let d = self.family.harmonic_derivatives(self.n, x).ok()?;
        let ph = self.phase(t);
        Some(d.map(|v| v * ph))
    }

    fn peak_modulus(&self, _t: f64) -> f64 {
        self.peak
    }

    fn classical_force_gradient(&self, x: f64) -> f64 {
        self.family.params.mass() * self.omega * self.omega * x
    }

    /// A real amplitude carries no current.
    fn velocity(&self, _x: f64, _t: f64) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridKind;

    fn unit() -> PhysParams {
        PhysParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn single_packet_peak_and_parity() {
        let s = PacketSpec::single(0.5, 0.8, 0.0, unit()).unwrap();
        let peak = gaussian_packet(&s, 0.5, 0.0).unwrap();
        assert!((peak.norm() - (2.0 * std::f64::consts::PI * 0.64).powf(-0.25)).abs() < 1e-14);
        for t in [0.0, 0.7, 3.0] {
            for d in [0.1, 1.0, 2.5] {
                let a = s.psi(0.5 + d, t).norm();
                let b = s.psi(0.5 - d, t).norm();
                assert!((a - b).abs() < 1e-15);
            }
        }
        assert!(gaussian_packet(&s, 0.0, -1.0).is_err());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(PacketSpec::new(vec![], unit()).is_err());
        assert!(PacketSpec::single(0.0, 0.0, 1.0, unit()).is_err());
        let zero = PacketComponent { center: 0.0, sigma: 1.0, k: 0.0, weight: 0.0 };
        assert!(PacketSpec::new(vec![zero], unit()).is_err());
    }

    #[test]
    fn norm_is_conserved() {
        let p = unit();
        let comps = vec![
            PacketComponent { center: -2.0, sigma: 0.7, k: 1.0, weight: 1.0 },
            PacketComponent { center: 1.5, sigma: 1.2, k: -0.5, weight: 0.6 },
        ];
        let s = PacketSpec::new(comps, p).unwrap();
        let g = Grid::with_spacing(GridKind::Cartesian, -40.0, 40.0, 0.01).unwrap();
        for t in [0.0, 1.0, 5.0] {
            let n = s.sample(&g, t).unwrap().norm_squared();
            assert!((n - 1.0).abs() < 1e-6, "t = {t}: {n}");
        }
    }

    #[test]
    fn packet_solves_free_schrodinger() {
        // i hbar psi_t = -(hbar^2/2m) psi_xx
        let p = PhysParams::new(1.3, 0.8).unwrap();
        let s = PacketSpec::new(
            vec![
                PacketComponent { center: 0.3, sigma: 0.9, k: 1.1, weight: 1.0 },
                PacketComponent { center: -1.0, sigma: 0.5, k: -0.4, weight: 0.5 },
            ],
            p,
        )
        .unwrap();
        let e = 1e-4;
        for (x, t) in [(0.0, 0.5), (1.2, 1.0), (-0.7, 2.0)] {
            let d = s.derivatives(x, t).unwrap();
            let dt = (s.psi(x, t + e) - s.psi(x, t - e)) / (2.0 * e);
            let lhs = Complex64::new(0.0, p.hbar()) * dt;
            let rhs = -p.hbar() * p.hbar() / (2.0 * p.mass()) * d[2];
            assert!((lhs - rhs).norm() < 1e-7, "{lhs} vs {rhs}");
            let dx = (s.psi(x + e, t) - s.psi(x - e, t)) / (2.0 * e);
            assert!((dx - d[1]).norm() < 1e-8);
            let d2 = |y: f64| s.derivatives(y, t).unwrap()[2];
            assert!(((d2(x + e) - d2(x - e)) / (2.0 * e) - d[3]).norm() < 1e-6);
        }
    }

    #[test]
    fn symmetric_pair_fringes() {
        // sigma = 1 at +-4: fringe depth ~ pi / (2 tau), tau = 4000 here
        let s = PacketSpec::two_gaussian(4.0, 1.0, unit()).unwrap();
        let t = 8000.0;
        let spacing = std::f64::consts::PI * t / 4.0;
        let g = Grid::with_spacing(GridKind::Cartesian, 0.0, 1.5 * spacing, spacing / 20000.0).unwrap();
        let m: Vec<f64> = g.points().map(|x| s.psi(x, t).norm()).collect();
        let first_min = (1..m.len() - 1).find(|&i| m[i] < m[i - 1] && m[i] <= m[i + 1]).unwrap();
        let peak_after = ((first_min + 1)..m.len() - 1).find(|&i| m[i] > m[i - 1] && m[i] >= m[i + 1]).unwrap();
        let constructive = m[0].min(m[peak_after]);
        assert!(m[first_min] < 1e-3 * constructive, "{} vs {}", m[first_min], constructive);
        assert!((g.point(first_min) - spacing / 2.0).abs() < 0.01 * spacing);
    }

    #[test]
    fn plane_wave_velocity_is_exact() {
        let w = PlaneWave { k: 2.0, params: unit() };
        assert_eq!(w.velocity(0.3, 1.7), 2.0);
        let d = w.derivatives(0.3, 0.0).unwrap();
        assert!((d[1] - Complex64::new(0.0, 2.0) * d[0]).norm() < 1e-15);
    }

    #[test]
    fn stationary_state_is_static() {
        let s = StationaryState::harmonic(ReferenceFamily::fig1(), 0).unwrap();
        assert!((s.energy() - 0.25).abs() < 1e-15);
        assert!((s.peak_modulus(0.0) - 0.631_618_7).abs() < 1e-6);
        assert_eq!(s.velocity(1.0, 2.0), 0.0);
        assert!((s.psi(0.5, 3.0).norm() - s.psi(0.5, 0.0).norm()).abs() < 1e-15);
    }
}
