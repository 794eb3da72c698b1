use crate::error::{domain, Error, Result};
use crate::fields::{Field, Meaning};
use crate::qpotential::PhysParams;

const GROWTH_LIMIT: f64 = 1e300;

/// Integrates `R'' = -(2m / hbar^2) V_Q(x) R` outward from the grid point `x0`
/// in both directions with fixed-step RK4 at the grid spacing.
///
/// `V_Q` is interpolated linearly inside each cell. In the first cell of each
/// sweep the value at `x0` is replaced by its one-sided limit from the swept
/// side (linear extrapolation of the two neighbours), so a jump located at the
/// seed point is resolved exactly. The result is not normalized.
pub fn integrate_amplitude_ode(v_q: &Field, x0: f64, r0: f64, dr0: f64, p: &PhysParams) -> Result<Field> {
    let grid = *v_q.grid();
    let i0 = grid
        .index_of(x0)
        .ok_or_else(|| Error::Domain(format!("seed point {x0} is not a grid point")))?;
    if r0 == 0.0 && dr0 == 0.0 {
        return domain("initial data (R, R') = (0, 0) gives the trivial solution");
    }
    if !r0.is_finite() || !dr0.is_finite() {
        return domain("initial data must be finite");
    }
    let n = grid.len();
    let v = v_q.values();
    let c = 2.0 * p.mass() / (p.hbar() * p.hbar());
    let mut out = vec![0.0; n];
    out[i0] = r0;

    for dir in [Sweep::Right, Sweep::Left] {
        let steps = match dir {
            Sweep::Right => n - 1 - i0,
            Sweep::Left => i0,
        };
        let sign = dir.sign();
        let dx = sign * grid.spacing();
        let mut y = [r0, dr0];
        let mut idx = i0;
        for s in 0..steps {
            let next = (idx as isize + sign as isize) as usize;
            let v_start = if s == 0 { one_sided(v, i0, dir) } else { v[idx] };
            let v_end = v[next];
            let v_mid = 0.5 * (v_start + v_end);
            y = rk4_step(y, dx, c, v_start, v_mid, v_end);
            if !(y[0].abs() <= GROWTH_LIMIT) || !(y[1].abs() <= GROWTH_LIMIT) {
                return Err(Error::Growth { last_x: grid.point(idx) });
            }
            out[next] = y[0];
            idx = next;
        }
    }
    Field::new(grid, out, Meaning::Amplitude)
}

#[derive(Debug, Clone, Copy)]
enum Sweep {
    Right,
    Left,
}

impl Sweep {
    fn sign(self) -> f64 {
        match self {
            Sweep::Right => 1.0,
            Sweep::Left => -1.0,
        }
    }
}

fn one_sided(v: &[f64], i0: usize, dir: Sweep) -> f64 {
    let (a, b) = match dir {
        Sweep::Right => (i0 + 1, i0 + 2),
        Sweep::Left => match (i0.checked_sub(1), i0.checked_sub(2)) {
            (Some(a), Some(b)) => (a, b),
            _ => return v[i0],
        },
    };
    if b < v.len() {
        2.0 * v[a] - v[b]
    } else {
        v[i0]
    }
}

#[inline]
fn rk4_step(y: [f64; 2], dx: f64, c: f64, v0: f64, vm: f64, v1: f64) -> [f64; 2] {
    let f = |y: [f64; 2], v: f64| [y[1], -c * v * y[0]];
    let k1 = f(y, v0);
    let k2 = f([y[0] + 0.5 * dx * k1[0], y[1] + 0.5 * dx * k1[1]], vm);
    let k3 = f([y[0] + 0.5 * dx * k2[0], y[1] + 0.5 * dx * k2[1]], vm);
    let k4 = f([y[0] + dx * k3[0], y[1] + dx * k3[1]], v1);
    [
        y[0] + dx / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + dx / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}
