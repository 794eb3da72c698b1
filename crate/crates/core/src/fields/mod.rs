//! Grids, sampled fields, second-order finite differences and trapezoidal
//! quadrature.

mod calculus;
mod field;
mod grid;
mod table;

pub use calculus::{integrate, laplacian, laplacian_with, norm_squared, normalize, OriginHint};
pub use field::{Field, MaskedField, Meaning};
pub use grid::{make_uniform_grid, Grid, GridKind};
pub use table::{format_f64, read_field_csv, write_field_csv, write_masked_field_csv, Table};
