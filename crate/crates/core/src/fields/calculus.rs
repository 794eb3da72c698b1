use super::field::{Field, MaskedField, Meaning};
use super::grid::GridKind;
use crate::error::{domain, Error, Result};

/// How the radial Laplacian treats the origin `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OriginHint {
    /// `2/r` is singular: the origin is masked.
    #[default]
    Singular,
    /// `f` is even in `r`, so `lap f(0) = 3 f''(0)`.
    EvenSymmetric,
}

/// Second-order Laplacian with the default origin handling.
pub fn laplacian(f: &Field) -> Result<MaskedField> {
    laplacian_with(f, OriginHint::Singular)
}

/// Cartesian `f''` or radial s-wave `f'' + (2/r) f'`, central differences.
///
/// Endpoint values are copied from the nearest interior point and masked.
pub fn laplacian_with(f: &Field, hint: OriginHint) -> Result<MaskedField> {
    let grid = *f.grid();
    let n = grid.len();
    if n < 3 {
        return domain("laplacian needs at least 3 points");
    }
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let y = f.values();
    let mut out = vec![0.0; n];
    let mut mask = vec![true; n];

    for i in 1..n - 1 {
        let second = (y[i - 1] - 2.0 * y[i] + y[i + 1]) * inv_h2;
        out[i] = match grid.kind() {
            GridKind::Cartesian => second,
            GridKind::Radial => {
                let r = grid.point(i);
                second + (y[i + 1] - y[i - 1]) / (h * r)
            }
        };
    }
    out[0] = out[1];
    out[n - 1] = out[n - 2];
    mask[0] = false;
    mask[n - 1] = false;

    if grid.contains_origin() && hint == OriginHint::EvenSymmetric {
        out[0] = 3.0 * 2.0 * (y[1] - y[0]) * inv_h2;
        mask[0] = true;
    }

    MaskedField::new(Field::new(grid, out, Meaning::Generic)?, mask)
}

/// Trapezoidal `int f dmu` with `dmu = dx` or `4 pi r^2 dr`.
pub fn integrate(f: &Field) -> f64 {
    weighted_sum(f, |v| v)
}

/// Trapezoidal `int f^2 dmu`.
pub fn norm_squared(f: &Field) -> f64 {
    weighted_sum(f, |v| v * v)
}

fn weighted_sum(f: &Field, g: impl Fn(f64) -> f64) -> f64 {
    let grid = f.grid();
    let n = grid.len();
    let y = f.values();
    let interior: f64 = (1..n - 1).map(|i| grid.measure(i) * g(y[i])).sum();
    let ends = 0.5 * (grid.measure(0) * g(y[0]) + grid.measure(n - 1) * g(y[n - 1]));
    grid.spacing() * (interior + ends)
}

/// Rescales an amplitude to unit norm and sets its normalized flag.
pub fn normalize(f: &Field) -> Result<Field> {
    if f.meaning() != Meaning::Amplitude {
        return domain("normalize expects an amplitude field");
    }
    let norm = norm_squared(f);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Normalization { norm });
    }
    let mut out = f.scaled(1.0 / norm.sqrt());
    out.set_normalized_unchecked();
    Ok(out)
}
