//! Closed-form reference families: the oracle side of every numerical check.
//!
//! Each family is read two ways. As a target quantum potential `V_Q` (what the
//! figures plot) and as the classical potential `V = -V_Q` whose bound states
//! source it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigensolver::BoundaryChoice;
use crate::error::{domain, Error, Result};
use crate::fields::{Field, Grid, GridKind, Meaning};
use crate::qpotential::PhysParams;
use crate::specfun::{airy_eval, hermite, AiryBranch};

/// Highest quantum number served for the harmonic and box families.
pub const MAX_REFERENCE_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `V_Q = -m omega^2 x^2 / 2`.
    Harmonic { omega: f64 },
    /// `V_Q = e^2 / r`, radial.
    HydrogenS { charge: f64 },
    /// `V_Q = 0` for `x < 0`, `V_0` for `x >= 0`.
    Step { v0: f64 },
    /// `V_Q = kappa x`.
    LinearAiry { kappa: f64, branch: AiryBranch },
    /// Infinite well on `[0, L]`, `V_Q = 0` inside.
    Box { length: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Harmonic { .. } => "harmonic",
            Family::HydrogenS { .. } => "hydrogen_s",
            Family::Step { .. } => "step",
            Family::LinearAiry { .. } => "linear_airy",
            Family::Box { .. } => "box",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFamily {
    pub family: Family,
    pub params: PhysParams,
}

impl ReferenceFamily {
    pub fn new(family: Family, params: PhysParams) -> Result<ReferenceFamily> {
        let c = match family {
            Family::Harmonic { omega } => omega,
            Family::HydrogenS { charge } => charge,
            Family::Step { v0 } => v0,
            Family::LinearAiry { kappa, .. } => kappa,
            Family::Box { length } => length,
        };
        if !(c > 0.0 && c.is_finite()) {
            return domain(format!("{} family constant must be positive, got {c}", family.name()));
        }
        Ok(ReferenceFamily { family, params })
    }

    /// Figure 1: `m = 1`, `omega = 1/2`.
    pub fn fig1() -> ReferenceFamily {
        Self::fiducial(Family::Harmonic { omega: 0.5 }, 1.0)
    }

    /// Figure 2: `e = 1`, `m = 0.511`.
    pub fn fig2() -> ReferenceFamily {
        Self::fiducial(Family::HydrogenS { charge: 1.0 }, 0.511)
    }

    /// Figure 3: `m = 1`, `V_0 = 1.5`.
    pub fn fig3() -> ReferenceFamily {
        Self::fiducial(Family::Step { v0: 1.5 }, 1.0)
    }

    /// Figure 4: `m = 1`, `kappa = 0.1`, Ai branch.
    pub fn fig4() -> ReferenceFamily {
        Self::fiducial(Family::LinearAiry { kappa: 0.1, branch: AiryBranch::Ai }, 1.0)
    }

    fn fiducial(family: Family, mass: f64) -> ReferenceFamily {
        let params = PhysParams::new(mass, 1.0).expect("fiducial mass is positive");
        ReferenceFamily::new(family, params).expect("fiducial constants are positive")
    }

    fn m(&self) -> f64 {
        self.params.mass()
    }

    fn hbar(&self) -> f64 {
        self.params.hbar()
    }

    /// Bohr-radius analog `hbar^2 / (m e^2)` (hydrogen only).
    pub fn bohr_radius(&self) -> Option<f64> {
        match self.family {
            Family::HydrogenS { charge } => Some(self.hbar() * self.hbar() / (self.m() * charge * charge)),
            _ => None,
        }
    }

    /// Step wavenumber `k = sqrt(2 m V_0) / hbar`.
    pub fn step_wavenumber(&self) -> Option<f64> {
        match self.family {
            Family::Step { v0 } => Some((2.0 * self.m() * v0).sqrt() / self.hbar()),
            _ => None,
        }
    }

    /// `k_1^{1/3}` with `k_1 = 2 m kappa / hbar^2` (linear only).
    pub fn airy_scale(&self) -> Option<f64> {
        match self.family {
            Family::LinearAiry { kappa, .. } => Some((2.0 * self.m() * kappa / (self.hbar() * self.hbar())).cbrt()),
            _ => None,
        }
    }

    /// Natural length of the family.
    pub fn length_scale(&self) -> f64 {
        match self.family {
            Family::Harmonic { omega } => (self.hbar() / (self.m() * omega)).sqrt(),
            Family::HydrogenS { .. } => self.bohr_radius().unwrap(),
            Family::Step { .. } => 1.0 / self.step_wavenumber().unwrap(),
            Family::LinearAiry { .. } => 1.0 / self.airy_scale().unwrap(),
            Family::Box { length } => length,
        }
    }

    pub fn geometry(&self) -> GridKind {
        match self.family {
            Family::HydrogenS { .. } => GridKind::Radial,
            _ => GridKind::Cartesian,
        }
    }

    /// Boundary treatment for the bound-state solver.
    pub fn boundary(&self) -> BoundaryChoice {
        match self.family {
            Family::HydrogenS { .. } => BoundaryChoice::RadialRegular,
            Family::Box { .. } => BoundaryChoice::HardWall,
            _ => BoundaryChoice::DirichletBox,
        }
    }

    /// Default solve domain: `+-12` oscillator lengths, `[0, 30 a_0]`, the box
    /// itself, and the figure windows for the step and linear families.
    pub fn default_grid(&self, h: f64) -> Result<Grid> {
        let (a, b) = match self.family {
            Family::Harmonic { .. } => {
                let l = 12.0 * self.length_scale();
                (-l, l)
            }
            Family::HydrogenS { .. } => (0.0, 30.0 * self.length_scale()),
            Family::Box { length } => (0.0, length),
            Family::Step { .. } => (-3.0, 3.0),
            Family::LinearAiry { .. } => (-20.0, 8.0),
        };
        Grid::with_spacing(self.geometry(), a, b, h)
    }

    fn check_n(&self, n: usize) -> Result<()> {
        let max = match self.family {
            Family::Harmonic { .. } | Family::Box { .. } => MAX_REFERENCE_N,
            _ => 0,
        };
        if n > max {
            return domain(format!("{} reference supports n <= {max}, got {n}", self.family.name()));
        }
        Ok(())
    }

    /// Closed-form amplitude `R_n(x)`.
    pub fn reference_amplitude(&self, n: usize, x: f64) -> Result<f64> {
        self.check_n(n)?;
        let (m, hbar) = (self.m(), self.hbar());
        Ok(match self.family {
            Family::Harmonic { omega } => {
                let alpha = (m * omega / hbar).sqrt();
                let xi = alpha * x;
                harmonic_norm(n, m, omega, hbar) * hermite(n as i32, xi)? * (-0.5 * xi * xi).exp()
            }
            Family::HydrogenS { .. } => {
                let a0 = self.bohr_radius().unwrap();
                a0.powf(-1.5) / PI.sqrt() * (-x.abs() / a0).exp()
            }
            Family::Step { .. } => {
                if x < 0.0 {
                    1.0
                } else {
                    (self.step_wavenumber().unwrap() * x).cos()
                }
            }
            Family::LinearAiry { branch, .. } => airy_eval(branch, -self.airy_scale().unwrap() * x)?.value,
            Family::Box { length } => {
                if (0.0..=length).contains(&x) {
                    (2.0 / length).sqrt() * ((n as f64 + 1.0) * PI * x / length).sin()
                } else {
                    0.0
                }
            }
        })
    }

    /// Closed-form `dR/dx` (step, linear and hydrogen families, `n = 0`).
    pub fn reference_slope(&self, x: f64) -> Result<f64> {
        self.check_n(0)?;
        Ok(match self.family {
            Family::Step { .. } => {
                let k = self.step_wavenumber().unwrap();
                if x < 0.0 {
                    0.0
                } else {
                    -k * (k * x).sin()
                }
            }
            Family::LinearAiry { branch, .. } => {
                let c = self.airy_scale().unwrap();
                -c * airy_eval(branch, -c * x)?.derivative
            }
            Family::HydrogenS { .. } => -self.reference_amplitude(0, x)? / self.bohr_radius().unwrap(),
            Family::Harmonic { .. } => self.harmonic_derivatives(0, x)?[1],
            Family::Box { length } => (2.0 / length).sqrt() * PI / length * (PI * x / length).cos(),
        })
    }

    /// `(R, R', R'', R''')` for the harmonic family, via the ladder identity
    /// `d/dxi [H_j e^{-xi^2/2}] = (j H_{j-1} - H_{j+1}/2) e^{-xi^2/2}`.
    pub fn harmonic_derivatives(&self, n: usize, x: f64) -> Result<[f64; 4]> {
        let Family::Harmonic { omega } = self.family else {
            return domain("harmonic_derivatives needs the harmonic family");
        };
        self.check_n(n)?;
        let (m, hbar) = (self.m(), self.hbar());
        let alpha = (m * omega / hbar).sqrt();
        let xi = alpha * x;
        let env = (-0.5 * xi * xi).exp();
        let norm = harmonic_norm(n, m, omega, hbar);
        let mut coeffs = vec![0.0; n + 5];
        coeffs[n] = 1.0;
        let mut out = [0.0; 4];
        let mut scale = norm;
        for (order, slot) in out.iter_mut().enumerate() {
            let mut sum = 0.0;
            for (j, &c) in coeffs.iter().enumerate() {
                if c != 0.0 {
                    sum += c * hermite(j as i32, xi)?;
                }
            }
            *slot = scale * sum * env;
            if order < 3 {
                let mut next = vec![0.0; coeffs.len()];
                for (j, &c) in coeffs.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    if j > 0 {
                        next[j - 1] += c * j as f64;
                    }
                    if j + 1 < next.len() {
                        next[j + 1] -= 0.5 * c;
                    }
                }
                coeffs = next;
                scale *= alpha;
            }
        }
        Ok(out)
    }

    /// Discrete energy `E_n`.
    pub fn reference_energy(&self, n: usize) -> Result<f64> {
        self.check_n(n)?;
        let (m, hbar) = (self.m(), self.hbar());
        match self.family {
            Family::Harmonic { omega } => Ok((n as f64 + 0.5) * hbar * omega),
            Family::HydrogenS { charge } => Ok(-m * charge.powi(4) / (2.0 * hbar * hbar)),
            Family::Box { length } => Ok(((n + 1) as f64 * PI * hbar / length).powi(2) / (2.0 * m)),
            Family::Step { .. } => Err(Error::NoDiscreteEnergy("step")),
            Family::LinearAiry { .. } => Err(Error::NoDiscreteEnergy("linear_airy")),
        }
    }

    /// Target quantum potential as plotted (no energy offset).
    pub fn reference_quantum_potential(&self, x: f64) -> f64 {
        match self.family {
            Family::Harmonic { omega } => -0.5 * self.m() * omega * omega * x * x,
            Family::HydrogenS { charge } => charge * charge / x.abs(),
            Family::Step { v0 } => {
                if x >= 0.0 {
                    v0
                } else {
                    0.0
                }
            }
            Family::LinearAiry { kappa, .. } => kappa * x,
            Family::Box { .. } => 0.0,
        }
    }

    /// Classical potential `V = -V_Q` whose eigenstates source the target.
    pub fn classical_potential(&self, x: f64) -> f64 {
        -self.reference_quantum_potential(x)
    }

    /// Target quantum potential sampled on `grid`; a radial origin holds the
    /// value at the first positive point.
    pub fn quantum_potential_field(&self, grid: &Grid) -> Result<Field> {
        let h = grid.spacing();
        Field::from_fn(*grid, Meaning::Potential, |x| {
            let x = if self.geometry() == GridKind::Radial && x == 0.0 { h } else { x };
            self.reference_quantum_potential(x)
        })
    }

    pub fn classical_potential_field(&self, grid: &Grid) -> Result<Field> {
        Ok(self.quantum_potential_field(grid)?.scaled(-1.0))
    }

    /// Reference amplitude sampled on `grid`.
    pub fn amplitude_field(&self, n: usize, grid: &Grid) -> Result<Field> {
        let values = grid.points().map(|x| self.reference_amplitude(n, x)).collect::<Result<Vec<_>>>()?;
        Field::new(*grid, values, Meaning::Amplitude)
    }
}

fn harmonic_norm(n: usize, m: f64, omega: f64, hbar: f64) -> f64 {
    let mut fact = 1.0;
    for k in 1..=n {
        fact *= 2.0 * k as f64;
    }
    (m * omega / (PI * hbar)).powf(0.25) / fact.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::norm_squared;

    #[test]
    fn fig1_peak() {
        let f = ReferenceFamily::fig1();
        let r0 = f.reference_amplitude(0, 0.0).unwrap();
        assert!((r0 - (0.5 / PI).powf(0.25)).abs() < 1e-15);
        assert!((r0 - 0.631_618_7).abs() < 1e-7);
        assert!((f.reference_energy(0).unwrap() - 0.25).abs() < 1e-15);
        assert!((f.reference_quantum_potential(2.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn fig2_values() {
        let f = ReferenceFamily::fig2();
        let a0 = f.bohr_radius().unwrap();
        assert!((a0 - 1.0 / 0.511).abs() < 1e-14);
        let peak = a0.powf(-1.5) / PI.sqrt();
        assert!((peak - 0.20609).abs() < 1e-5);
        assert!((f.reference_amplitude(0, a0).unwrap() - 0.075_816).abs() < 1e-6);
        assert!((f.reference_energy(0).unwrap() + 0.2555).abs() < 1e-15);
        assert!((f.reference_quantum_potential(2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fig3_and_fig4_values() {
        let s = ReferenceFamily::fig3();
        assert!((s.step_wavenumber().unwrap() - 3.0_f64.sqrt()).abs() < 1e-15);
        assert!((s.reference_amplitude(0, PI / 3.0_f64.sqrt()).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(s.reference_amplitude(0, -1.0).unwrap(), 1.0);
        assert!(matches!(s.reference_energy(0), Err(Error::NoDiscreteEnergy(_))));

        let l = ReferenceFamily::fig4();
        assert!((l.reference_quantum_potential(3.0) - 0.3).abs() < 1e-15);
        assert!(l.reference_energy(0).is_err());
        assert!(l.reference_amplitude(1, 0.0).is_err());
    }

    #[test]
    fn rejects_non_positive_constants() {
        let p = PhysParams::new(1.0, 1.0).unwrap();
        assert!(ReferenceFamily::new(Family::Harmonic { omega: 0.0 }, p).is_err());
        assert!(ReferenceFamily::new(Family::Box { length: -1.0 }, p).is_err());
        let h = ReferenceFamily::fig1();
        assert!(h.reference_amplitude(21, 0.0).is_err());
    }

    #[test]
    fn sampled_references_have_unit_norm() {
        let h = ReferenceFamily::fig1();
        let g = h.default_grid(0.01).unwrap();
        for n in [0, 1, 5, 20] {
            let f = h.amplitude_field(n, &g).unwrap();
            assert!((norm_squared(&f) - 1.0).abs() < 1e-6, "n={n}");
        }
        let hy = ReferenceFamily::fig2();
        let g = hy.default_grid(0.005).unwrap();
        assert!((norm_squared(&hy.amplitude_field(0, &g).unwrap()) - 1.0).abs() < 1e-6);
        let b = ReferenceFamily::new(Family::Box { length: 2.0 }, PhysParams::new(1.0, 1.0).unwrap()).unwrap();
        let g = b.default_grid(1e-3).unwrap();
        assert!((norm_squared(&b.amplitude_field(3, &g).unwrap()) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn harmonic_derivatives_match_finite_differences() {
        let f = ReferenceFamily::new(Family::Harmonic { omega: 0.7 }, PhysParams::new(1.3, 0.9).unwrap()).unwrap();
        let e = 1e-4;
        for n in [0, 1, 3] {
            for x in [-2.0, -0.3, 0.0, 1.1, 2.7] {
                let d = f.harmonic_derivatives(n, x).unwrap();
                let r = |t: f64| f.reference_amplitude(n, t).unwrap();
                assert!((d[0] - r(x)).abs() < 1e-14);
                assert!((d[1] - (r(x + e) - r(x - e)) / (2.0 * e)).abs() < 1e-7);
                assert!((d[2] - (r(x + e) - 2.0 * r(x) + r(x - e)) / (e * e)).abs() < 1e-5);
                let dd = |t: f64| f.harmonic_derivatives(n, t).unwrap()[2];
                assert!((d[3] - (dd(x + e) - dd(x - e)) / (2.0 * e)).abs() < 1e-6);
            }
        }
    }
}
