use std::io::Write;

use num_complex::Complex64;

use super::provider::WaveProvider;
use crate::error::{domain, Error, Result};
use crate::fields::format_f64;

/// `|Psi| < NODE_HALT_TOL * max|Psi|` stops a trajectory.
pub const NODE_HALT_TOL: f64 = 1e-10;
/// Samples with `|Psi|` below this fraction of the peak are excluded from the
/// Newton check.
pub const NEWTON_NODE_TOL: f64 = 1e-6;

/// Path of one particle under the guidance equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub initial_position: f64,
    /// Time of the last valid sample when the path ran into a node.
    pub halted_at: Option<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_position(&self) -> f64 {
        *self.positions.last().expect("trajectory holds its initial point")
    }
}

/// RK4 integration of `dx/dt = v(x, t)` from `t = 0` to `t_end` with step `dt`.
///
/// Trajectories advance in lockstep so the node reference `max|Psi(., t)|` is
/// evaluated once per step; each path depends only on its own initial point.
pub fn bohm_trajectories(
    provider: &dyn WaveProvider,
    initial_positions: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<Vec<Trajectory>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return domain(format!("time step must be positive, got {dt}"));
    }
    if !(t_end >= dt) || !t_end.is_finite() {
        return domain(format!("t_end must be at least dt, got {t_end}"));
    }
    if let Some(x) = initial_positions.iter().find(|x| !x.is_finite()) {
        return domain(format!("initial position {x} is not finite"));
    }
    let steps = (t_end / dt).round() as usize;
    let mut out: Vec<Trajectory> = initial_positions
        .iter()
        .map(|&x0| Trajectory { times: vec![0.0], positions: vec![x0], initial_position: x0, halted_at: None })
        .collect();
    let peak0 = provider.peak_modulus(0.0);
    for traj in out.iter_mut() {
        if provider.psi(traj.initial_position, 0.0).norm() < NODE_HALT_TOL * peak0 {
            traj.halted_at = Some(0.0);
        }
    }
    for s in 0..steps {
        let t = s as f64 * dt;
        let peak = provider.peak_modulus(t);
        let at_node = |x: f64, t: f64| provider.psi(x, t).norm() < NODE_HALT_TOL * peak;
        for traj in out.iter_mut().filter(|tr| tr.halted_at.is_none()) {
            let x = traj.final_position();
            let stage = |x: f64, t: f64| -> Option<f64> {
                if at_node(x, t) {
                    None
                } else {
                    Some(provider.velocity(x, t))
                }
            };
            let next = stage(x, t).and_then(|k1| {
                let k2 = stage(x + 0.5 * dt * k1, t + 0.5 * dt)?;
                let k3 = stage(x + 0.5 * dt * k2, t + 0.5 * dt)?;
                let k4 = stage(x + dt * k3, t + dt)?;
                Some(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
            });
            match next {
                Some(x1) if x1.is_finite() => {
                    traj.times.push((s + 1) as f64 * dt);
                    traj.positions.push(x1);
                }
                _ => traj.halted_at = Some(t),
            }
        }
    }
    Ok(out)
}

/// `d V_Q / dx` of the amplitude `|Psi|`, from the analytic derivatives.
///
/// With `L = Psi'/Psi`, `Q = lap R / R = Re(Psi''/Psi) + (Im L)^2`.
fn quantum_force_analytic(d: &[Complex64; 4], kinetic: f64) -> f64 {
    let l = d[1] / d[0];
    let q2 = d[2] / d[0];
    let q3 = d[3] / d[0];
    let dq = (q3 - q2 * l).re + 2.0 * l.im * (q2 - l * l).im;
    -kinetic * dq
}

/// `d V_Q / dx` by central differences of `|Psi|` with step `h`.
fn quantum_force_fd(provider: &dyn WaveProvider, x: f64, t: f64, h: f64, kinetic: f64) -> f64 {
    let r = |y: f64| provider.psi(y, t).norm();
    let vq = |y: f64| {
        let c = r(y);
        -kinetic * (r(y + h) - 2.0 * c + r(y - h)) / (h * h * c)
    };
    (vq(x + h) - vq(x - h)) / (2.0 * h)
}

/// Largest `|m x'' + d(V + V_Q)/dx|` over interior samples of `traj`, with
/// `x''` the second time difference and `V_Q` from the provider's amplitude.
pub fn newton_residual(traj: &Trajectory, provider: &dyn WaveProvider) -> Result<f64> {
    newton_residual_impl(traj, provider, None)
}

/// As [`newton_residual`], with `d V_Q/dx` from central differences of `|Psi|`
/// at spacing `h` instead of the analytic derivatives.
pub fn newton_residual_fd(traj: &Trajectory, provider: &dyn WaveProvider, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return domain(format!("difference step must be positive, got {h}"));
    }
    newton_residual_impl(traj, provider, Some(h))
}

fn newton_residual_impl(traj: &Trajectory, provider: &dyn WaveProvider, fd: Option<f64>) -> Result<f64> {
    let n = traj.len();
    if n < 5 {
        return Err(Error::InsufficientData(format!("trajectory has {n} points, need at least 5")));
    }
    let p = provider.params();
    let kinetic = p.kinetic_prefactor();
    let (t, x) = (&traj.times, &traj.positions);
    let mut worst = 0.0_f64;
    let mut used = 0usize;
    for i in 1..n - 1 {
        let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
        let accel = 2.0 * ((x[i + 1] - x[i]) / h1 - (x[i] - x[i - 1]) / h0) / (h0 + h1);
        let peak = provider.peak_modulus(t[i]);
        if provider.psi(x[i], t[i]).norm() < NEWTON_NODE_TOL * peak {
            continue;
        }
        let dvq = match (fd, provider.derivatives(x[i], t[i])) {
            (None, Some(d)) => quantum_force_analytic(&d, kinetic),
            (Some(h), _) => quantum_force_fd(provider, x[i], t[i], h, kinetic),
            (None, None) => quantum_force_fd(provider, x[i], t[i], 1e-3, kinetic),
        };
        let r = (p.mass() * accel + provider.classical_force_gradient(x[i]) + dvq).abs();
        if r.is_finite() {
            worst = worst.max(r);
            used += 1;
        }
    }
    if 2 * used < n - 2 {
        return Err(Error::InsufficientData(format!("{} of {} interior samples lie at nodes", n - 2 - used, n - 2)));
    }
    Ok(worst)
}

/// CSV bundle `t,x_1,...,x_m`; halted paths are padded with empty cells.
pub fn write_trajectories_csv<W: Write>(trajs: &[Trajectory], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Input(format!("failed to write trajectories: {e}"));
    let mut header = vec!["t".to_string()];
    header.extend((1..=trajs.len()).map(|i| format!("x_{i}")));
    w.write_record(&header).map_err(io)?;
    let longest = trajs.iter().max_by_key(|t| t.len());
    if let Some(longest) = longest {
        for (i, &t) in longest.times.iter().enumerate() {
            let mut row = vec![format_f64(t)];
            row.extend(trajs.iter().map(|tr| tr.positions.get(i).map(|&x| format_f64(x)).unwrap_or_default()));
            w.write_record(&row).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Input(format!("failed to write trajectories: {e}")))?;
    Ok(())
}
