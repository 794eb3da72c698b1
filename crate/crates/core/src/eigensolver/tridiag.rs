//! Symmetric tridiagonal kernels: Sturm counts, bisection for a single
//! eigenvalue, and inverse iteration for its eigenvector.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix with diagonal `diag` and constant off-diagonal `off`.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: f64,
}

impl SymTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDL^T pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let guard = f64::EPSILON * self.norm_bound().max(f64::MIN_POSITIVE);
        let e2 = self.off * self.off;
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 0..self.diag.len() {
            if i > 0 {
                let q_safe = if q.abs() < guard { guard.copysign(q) } else { q };
                q = (self.diag[i] - lambda) - e2 / q_safe;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Result of bisecting for the `k`-th smallest eigenvalue.
#[derive(Debug, Clone, Copy)]
pub struct Bisection {
    pub value: f64,
    pub width: f64,
    pub iterations: usize,
}

/// Brackets the `k`-th (0-based) smallest eigenvalue until the bracket is
/// narrower than `rel_tol * max(1, |E|)` or cannot shrink further.
pub fn bisect_eigenvalue(t: &SymTridiagonal, k: usize, rel_tol: f64) -> Result<Bisection> {
    if k >= t.len() {
        return Err(Error::Domain(format!("matrix of order {} has no eigenvalue index {k}", t.len())));
    }
    let (mut lo, mut hi) = t.gershgorin();
    let pad = f64::EPSILON * t.norm_bound() + f64::MIN_POSITIVE;
    lo -= pad;
    hi += pad;
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if t.sturm_count(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Bisection { value: 0.5 * (lo + hi), width: hi - lo, iterations })
}

/// LU factorization with partial pivoting of a general tridiagonal matrix
/// (the `gttrf` layout: `dl`, `d`, `du`, second superdiagonal `du2`).
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    /// Factors `t - shift I`; exactly zero pivots are replaced by `tiny`.
    fn factor(t: &SymTridiagonal, shift: f64, tiny: f64) -> TridiagonalLu {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut dl = vec![t.off; n.saturating_sub(1)];
        let mut du = vec![t.off; n.saturating_sub(1)];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        TridiagonalLu { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Eigenvector estimate from inverse iteration.
#[derive(Debug, Clone)]
pub struct InverseIteration {
    /// Unit max-norm eigenvector.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub last_update: f64,
}

/// Inverse iteration with shift `shift`, stopping when the max-norm update
/// drops below `tol` or after `max_iter` solves.
pub fn inverse_iteration(t: &SymTridiagonal, shift: f64, tol: f64, max_iter: usize) -> InverseIteration {
    let n = t.len();
    let tiny = f64::EPSILON * t.norm_bound().max(f64::MIN_POSITIVE);
    let lu = TridiagonalLu::factor(t, shift, tiny);
    // deterministic start with no parity
    let golden = 0.618_033_988_749_894_9;
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i as f64 * golden).fract() - 0.5)).collect();
    scale_to_unit_max(&mut x);

    let mut iterations = 0;
    let mut last_update = f64::INFINITY;
    while iterations < max_iter {
        let mut y = x.clone();
        lu.solve(&mut y);
        scale_to_unit_max(&mut y);
        let dot: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        last_update = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = y;
        iterations += 1;
        if last_update < tol {
            break;
        }
    }
    InverseIteration { vector: x, iterations, last_update }
}

fn scale_to_unit_max(v: &mut [f64]) {
    let m = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if m > 0.0 && m.is_finite() {
        v.iter_mut().for_each(|x| *x /= m);
    }
}
