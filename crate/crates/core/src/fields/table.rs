//! Column tables and the `x,value` CSV layout shared by every command.
//!
//! Numbers are written with 17 significant digits; a missing or masked value
//! is an empty cell.

use std::io::{Read, Write};

use super::field::{Field, MaskedField, Meaning};
use super::grid::{Grid, GridKind};
use crate::error::{Error, Result};

/// Formats a float with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Named columns of optional numbers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new() -> Table {
        Table::default()
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) {
        self.headers.push(name.into());
        self.columns.push(values);
    }

    pub fn push_dense(&mut self, name: impl Into<String>, values: &[f64]) {
        self.push_column(name, values.iter().map(|&v| Some(v)).collect());
    }

    pub fn rows(&self) -> usize {
        self.columns.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(&self.columns[i])
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers).map_err(io_err)?;
        for row in 0..self.rows() {
            let record = self.columns.iter().map(|col| match col.get(row).copied().flatten() {
                Some(v) => format_f64(v),
                None => String::new(),
            });
            w.write_record(record).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::Input(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Table> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
        let headers: Vec<String> = r.headers().map_err(io_err)?.iter().map(str::to_owned).collect();
        if headers.is_empty() {
            return Err(Error::Input("CSV has no header".into()));
        }
        let mut columns = vec![Vec::new(); headers.len()];
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(io_err)?;
            if record.len() != headers.len() {
                return Err(Error::Input(format!("row {} has {} cells, expected {}", line + 2, record.len(), headers.len())));
            }
            for (col, cell) in columns.iter_mut().zip(record.iter()) {
                if cell.is_empty() {
                    col.push(None);
                } else {
                    let v: f64 = cell
                        .parse()
                        .map_err(|_| Error::Input(format!("row {}: cannot parse '{cell}'", line + 2)))?;
                    col.push(Some(v));
                }
            }
        }
        Ok(Table { headers, columns })
    }

    /// Rebuilds a grid from the first column (`x` or `r`) and a field from column `name`.
    ///
    /// Empty cells in the value column come back masked (stored as 0).
    pub fn field(&self, name: &str, meaning: Meaning) -> Result<MaskedField> {
        let grid = self.grid()?;
        let col = self
            .column(name)
            .ok_or_else(|| Error::Input(format!("no column named '{name}' (have {:?})", self.headers)))?;
        let values = col.iter().map(|v| v.unwrap_or(0.0)).collect();
        let mask = col.iter().map(Option::is_some).collect();
        MaskedField::new(Field::new(grid, values, meaning)?, mask)
    }

    /// Uniform grid described by the coordinate column.
    pub fn grid(&self) -> Result<Grid> {
        let kind = match self.headers.first().map(String::as_str) {
            Some("x") => GridKind::Cartesian,
            Some("r") => GridKind::Radial,
            other => return Err(Error::Input(format!("first column must be 'x' or 'r', got {other:?}"))),
        };
        let coords: Vec<f64> = self.columns[0]
            .iter()
            .map(|c| c.ok_or_else(|| Error::Input("empty coordinate cell".into())))
            .collect::<Result<_>>()?;
        let n = coords.len();
        if n < 3 {
            return Err(Error::Input(format!("need at least 3 rows, got {n}")));
        }
        let grid = super::make_uniform_grid(kind, coords[0], coords[n - 1], n)?;
        let tol = 1e-6 * grid.spacing();
        for (i, &x) in coords.iter().enumerate() {
            if (grid.point(i) - x).abs() > tol {
                return Err(Error::Input(format!("coordinate column is not uniform at row {}", i + 2)));
            }
        }
        Ok(grid)
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Input(e.to_string())
}

/// Writes a field as `x,value` (or `r,value`).
pub fn write_field_csv<W: Write>(field: &Field, out: W) -> Result<()> {
    write_masked_field_csv(&MaskedField::unmasked(field.clone()), out)
}

/// Writes a masked field as `x,value`, masked rows with an empty value cell.
pub fn write_masked_field_csv<W: Write>(field: &MaskedField, out: W) -> Result<()> {
    let grid = field.grid();
    let mut t = Table::new();
    t.push_dense(grid.kind().coordinate_name(), &grid.points().collect::<Vec<_>>());
    t.push_column("value", (0..field.len()).map(|i| field.get(i)).collect());
    t.write_csv(out)
}

/// Reads an `x,value` / `r,value` CSV.
pub fn read_field_csv<R: Read>(input: R, meaning: Meaning) -> Result<MaskedField> {
    let t = Table::read_csv(input)?;
    let name = t.headers.get(1).cloned().ok_or_else(|| Error::Input("CSV needs a value column".into()))?;
    t.field(&name, meaning)
}
