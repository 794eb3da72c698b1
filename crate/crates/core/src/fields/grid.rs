use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Geometry of a sampling lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// A segment of the real line, coordinate `x`.
    Cartesian,
    /// A segment of the radial half-line, coordinate `r >= 0`, measure `4 pi r^2 dr`.
    Radial,
}

impl GridKind {
    /// Name of the coordinate column in CSV output.
    pub fn coordinate_name(self) -> &'static str {
        match self {
            GridKind::Cartesian => "x",
            GridKind::Radial => "r",
        }
    }
}

/// Uniform 1D lattice `x_i = x_min + i * h`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    kind: GridKind,
    x_min: f64,
    x_max: f64,
    n: usize,
    h: f64,
}

/// Builds a uniform grid with `n` points spanning `[x_min, x_max]`.
pub fn make_uniform_grid(kind: GridKind, x_min: f64, x_max: f64, n: usize) -> Result<Grid> {
    if !x_min.is_finite() || !x_max.is_finite() {
        return domain(format!("grid bounds must be finite, got [{x_min}, {x_max}]"));
    }
    if n < 3 {
        return domain(format!("grid needs at least 3 points, got {n}"));
    }
    if x_min >= x_max {
        return domain(format!("grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"));
    }
    if kind == GridKind::Radial && x_min < 0.0 {
        return domain(format!("radial grid must start at r >= 0, got {x_min}"));
    }
    let h = (x_max - x_min) / (n - 1) as f64;
    if h <= 0.0 {
        return domain("grid spacing underflowed to zero");
    }
    Ok(Grid { kind, x_min, x_max, n, h })
}

impl Grid {
    /// Grid over `[x_min, x_max]` whose spacing is as close to `h` as an integer
    /// point count allows.
    pub fn with_spacing(kind: GridKind, x_min: f64, x_max: f64, h: f64) -> Result<Grid> {
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("grid spacing must be positive, got {h}"));
        }
        let steps = ((x_max - x_min) / h).round();
        if !steps.is_finite() || steps < 2.0 {
            return domain(format!("interval [{x_min}, {x_max}] holds fewer than 3 points at h = {h}"));
        }
        make_uniform_grid(kind, x_min, x_max, steps as usize + 1)
    }

    /// Grid with spacing exactly `h` starting at `x_min` with `n` points.
    pub fn from_start(kind: GridKind, x_min: f64, h: f64, n: usize) -> Result<Grid> {
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("grid spacing must be positive, got {h}"));
        }
        let mut grid = make_uniform_grid(kind, x_min, x_min + (n.max(3) - 1) as f64 * h, n)?;
        grid.h = h;
        Ok(grid)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.h
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Index of the grid point equal to `x` up to `1e-6 * h`.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let s = (x - self.x_min) / self.h;
        let i = s.round();
        if i < 0.0 || i >= self.n as f64 {
            return None;
        }
        let i = i as usize;
        ((self.point(i) - x).abs() <= 1e-6 * self.h).then_some(i)
    }

    /// True when the grid includes the radial origin `r = 0` as its first point.
    pub fn contains_origin(&self) -> bool {
        self.kind == GridKind::Radial && self.x_min == 0.0
    }

    /// Integration measure density at point `i`: 1 (cartesian) or `4 pi r^2` (radial).
    #[inline]
    pub fn measure(&self, i: usize) -> f64 {
        match self.kind {
            GridKind::Cartesian => 1.0,
            GridKind::Radial => {
                let r = self.point(i);
                4.0 * std::f64::consts::PI * r * r
            }
        }
    }

    /// Same lattice, compared with a relative tolerance on bounds and spacing.
    pub fn same_lattice(&self, other: &Grid) -> bool {
        let tol = 1e-9 * self.h;
        self.kind == other.kind
            && self.n == other.n
            && (self.x_min - other.x_min).abs() <= tol
            && (self.h - other.h).abs() <= 1e-9 * self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_five_points() {
        let g = make_uniform_grid(GridKind::Cartesian, 0.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.25);
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn radial_spacing() {
        let g = make_uniform_grid(GridKind::Radial, 0.0, 10.0, 11).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert!(g.contains_origin());
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(make_uniform_grid(GridKind::Cartesian, 1.0, 0.0, 5).is_err());
        assert!(make_uniform_grid(GridKind::Cartesian, 0.0, 1.0, 2).is_err());
        assert!(make_uniform_grid(GridKind::Radial, -1.0, 1.0, 5).is_err());
        assert!(make_uniform_grid(GridKind::Cartesian, 0.0, f64::NAN, 5).is_err());
    }

    #[test]
    fn points_are_reproducible_from_start_and_spacing() {
        let g = make_uniform_grid(GridKind::Cartesian, -3.0, 3.0, 3001).unwrap();
        for i in [0, 17, 1500, 3000] {
            assert_eq!(g.point(i), -3.0 + i as f64 * g.spacing());
        }
        assert_eq!(g.index_of(0.0), Some(1500));
        assert_eq!(g.index_of(0.0005), None);
    }
}
