//! Square matrices stored as diagonal bands.
//!
//! A band at offset `d` holds the entries `(j + d, j)` for every column `j`
//! whose target row stays inside the matrix. Values are indexed by column, so
//! `values[j]` is the entry in column `j`; slots whose row falls outside the
//! matrix are kept at zero and ignored.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    pub offset: i64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    dim: usize,
    bands: Vec<Band>,
}

impl BandedMatrix {
    pub fn new(dim: usize) -> Self {
        BandedMatrix { dim, bands: Vec::new() }
    }

    /// Builds from `(offset, values)` pairs; duplicate offsets accumulate.
    pub fn from_bands(dim: usize, bands: Vec<(i64, Vec<f64>)>) -> Result<Self> {
        let mut m = BandedMatrix::new(dim);
        for (offset, values) in bands {
            if values.len() != dim {
                return Err(Error::Dimension(format!(
                    "band at offset {} has {} values, expected {}",
                    offset,
                    values.len(),
                    dim
                )));
            }
            for (j, v) in values.into_iter().enumerate() {
                if v != 0.0 {
                    m.add(offset, j, v);
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    fn band_position(&self, offset: i64) -> std::result::Result<usize, usize> {
        self.bands.binary_search_by_key(&offset, |b| b.offset)
    }

    /// Adds `value` to the entry `(j + offset, j)`. Out-of-range targets are
    /// ignored so assembly loops need no boundary branches.
    pub fn add(&mut self, offset: i64, j: usize, value: f64) {
        let row = j as i64 + offset;
        if row < 0 || row >= self.dim as i64 {
            return;
        }
        let pos = match self.band_position(offset) {
            Ok(pos) => pos,
            Err(pos) => {
                self.bands.insert(
                    pos,
                    Band {
                        offset,
                        values: vec![0.0; self.dim],
                    },
                );
                pos
            }
        };
        self.bands[pos].values[j] += value;
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let offset = i as i64 - j as i64;
        match self.band_position(offset) {
            Ok(pos) => self.bands[pos].values[j],
            Err(_) => 0.0,
        }
    }

    /// Largest subdiagonal extent (rows below the diagonal).
    pub fn lower_bandwidth(&self) -> usize {
        self.bands.iter().map(|b| b.offset.max(0) as usize).max().unwrap_or(0)
    }

    /// Largest superdiagonal extent (rows above the diagonal).
    pub fn upper_bandwidth(&self) -> usize {
        self.bands.iter().map(|b| (-b.offset).max(0) as usize).max().unwrap_or(0)
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        y.fill(0.0);
        for band in &self.bands {
            let d = band.offset;
            let j_lo = (-d).max(0) as usize;
            let j_hi = (self.dim as i64 - 1 - d.max(0)).min(self.dim as i64 - 1);
            if j_hi < j_lo as i64 {
                continue;
            }
            for j in j_lo..=(j_hi as usize) {
                let row = (j as i64 + d) as usize;
                y[row] += band.values[j] * x[j];
            }
        }
    }

    pub fn scaled(&self, s: f64) -> BandedMatrix {
        BandedMatrix {
            dim: self.dim,
            bands: self
                .bands
                .iter()
                .map(|b| Band {
                    offset: b.offset,
                    values: b.values.iter().map(|&v| v * s).collect(),
                })
                .collect(),
        }
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut sums = vec![0.0f64; self.dim];
        for band in &self.bands {
            let d = band.offset;
            for (j, &v) in band.values.iter().enumerate() {
                let row = j as i64 + d;
                if row >= 0 && row < self.dim as i64 {
                    sums[j] += v.abs();
                }
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Signed column sum, used to check the generator property.
    pub fn column_sum(&self, j: usize) -> f64 {
        self.bands
            .iter()
            .filter(|b| {
                let row = j as i64 + b.offset;
                row >= 0 && row < self.dim as i64
            })
            .map(|b| b.values[j])
            .sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for band in &self.bands {
            for (j, &v) in band.values.iter().enumerate() {
                let row = j as i64 + band.offset;
                if row >= 0 && row < self.dim as i64 {
                    m[(row as usize, j)] += v;
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn entry_and_add_round_trip() {
        let mut m = BandedMatrix::new(4);
        m.add(0, 1, -2.0);
        m.add(1, 0, 3.0);
        m.add(-2, 3, 0.5);
        m.add(1, 3, 9.0); // row 4 out of range, dropped
        assert_eq!(m.entry(1, 1), -2.0);
        assert_eq!(m.entry(1, 0), 3.0);
        assert_eq!(m.entry(1, 3), 0.5);
        assert_eq!(m.entry(0, 0), 0.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let m = BandedMatrix::from_bands(
            5,
            vec![
                (0, vec![-1.0, -2.0, -3.0, -4.0, -5.0]),
                (1, vec![1.0, 2.0, 3.0, 4.0, 0.0]),
                (-2, vec![0.0, 0.0, 7.0, 8.0, 9.0]),
            ],
        )
        .unwrap();
        let x = [1.0, -1.0, 2.0, 0.5, 3.0];
        let mut y = vec![0.0; 5];
        m.matvec(&x, &mut y);
        let dense = m.to_dense();
        let yd = dense * nalgebra::DVector::from_row_slice(&x);
        for i in 0..5 {
            assert_relative_eq!(y[i], yd[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn norms_and_bandwidths() {
        let m = BandedMatrix::from_bands(
            3,
            vec![(0, vec![-2.0, -2.0, -2.0]), (1, vec![2.0, 2.0, 0.0])],
        )
        .unwrap();
        assert_eq!(m.lower_bandwidth(), 1);
        assert_eq!(m.upper_bandwidth(), 0);
        assert_relative_eq!(m.one_norm(), 4.0);
        assert_relative_eq!(m.column_sum(0), 0.0);
        assert_relative_eq!(m.column_sum(2), -2.0);
    }
}
