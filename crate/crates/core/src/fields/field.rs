use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{domain, Error, Result};

/// What a sampled field represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Meaning {
    Amplitude,
    Potential,
    Density,
    Generic,
}

/// Real samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
    meaning: Meaning,
    normalized: bool,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>, meaning: Meaning) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return domain(format!("non-finite value {} at x = {}", values[i], grid.point(i)));
        }
        Ok(Field { grid, values, meaning, normalized: false })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, meaning: Meaning, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::new(grid, grid.points().map(f).collect(), meaning)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn meaning(&self) -> Meaning {
        self.meaning
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn with_meaning(mut self, meaning: Meaning) -> Field {
        self.meaning = meaning;
        if meaning != Meaning::Amplitude {
            self.normalized = false;
        }
        self
    }

    /// Sets the normalized flag when `int f^2 dmu = 1` within `1e-8`.
    pub fn mark_normalized(mut self) -> Result<Field> {
        if self.meaning != Meaning::Amplitude {
            return domain("only amplitude fields carry a normalized flag");
        }
        let norm = super::norm_squared(&self);
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::Normalization { norm });
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `c * self`, keeping the meaning; the normalized flag is dropped.
    pub fn scaled(&self, c: f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
            meaning: self.meaning,
            normalized: false,
        }
    }

    /// Pointwise map, keeping the grid.
    pub fn map(&self, meaning: Meaning, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        let values = self
            .grid
            .points()
            .zip(&self.values)
            .map(|(x, &v)| f(x, v))
            .collect();
        Field::new(self.grid, values, meaning)
    }

    /// Restriction to the index range `[start, start + len)` of this grid.
    pub fn window(&self, start: usize, len: usize) -> Result<Field> {
        if len < 3 || start + len > self.grid.len() {
            return domain(format!("window [{start}, {}) outside a grid of {}", start + len, self.grid.len()));
        }
        let grid = Grid::from_start(self.grid.kind(), self.grid.point(start), self.grid.spacing(), len)?;
        Field::new(grid, self.values[start..start + len].to_vec(), self.meaning)
    }

    pub(crate) fn set_normalized_unchecked(&mut self) {
        self.normalized = true;
    }
}

/// A field with a validity mask (`true` = usable value).
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedField {
    base: Field,
    mask: Vec<bool>,
}

impl MaskedField {
    pub fn new(base: Field, mask: Vec<bool>) -> Result<MaskedField> {
        if mask.len() != base.len() {
            return Err(Error::GridMismatch(format!(
                "mask of {} entries for a field of {}",
                mask.len(),
                base.len()
            )));
        }
        Ok(MaskedField { base, mask })
    }

    /// Everything valid.
    pub fn unmasked(base: Field) -> MaskedField {
        let mask = vec![true; base.len()];
        MaskedField { base, mask }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn grid(&self) -> &Grid {
        self.base.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.base.values()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn is_valid(&self, i: usize) -> bool {
        self.mask[i]
    }

    /// Value at `i` if unmasked.
    pub fn get(&self, i: usize) -> Option<f64> {
        self.mask[i].then(|| self.base.values()[i])
    }

    /// `(index, coordinate, value)` for every unmasked point.
    pub fn valid(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let grid = *self.base.grid();
        self.base
            .values()
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.mask[*i])
            .map(move |(i, &v)| (i, grid.point(i), v))
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn masked_fraction(&self) -> f64 {
        1.0 - self.valid_count() as f64 / self.len() as f64
    }

    /// Largest `|value|` over unmasked points (0 when everything is masked).
    pub fn max_abs(&self) -> f64 {
        self.valid().fold(0.0_f64, |m, (_, _, v)| m.max(v.abs()))
    }

    /// Removes points from the mask; never re-validates one.
    pub fn and_mask(mut self, other: &[bool]) -> MaskedField {
        for (m, &o) in self.mask.iter_mut().zip(other) {
            *m = *m && o;
        }
        self
    }

    /// Pointwise map over values, mask kept.
    pub fn map_values(&self, f: impl Fn(f64, f64) -> f64) -> MaskedField {
        let grid = *self.base.grid();
        let values = self
            .base
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| f(grid.point(i), v))
            .collect();
        MaskedField {
            base: Field { grid, values, meaning: self.base.meaning(), normalized: false },
            mask: self.mask.clone(),
        }
    }
}
