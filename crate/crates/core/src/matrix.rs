use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wavelet::ScaleGrid;

/// Length, rate and start time of the signal a matrix was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalMeta {
    pub len: usize,
    pub fs: f64,
    pub t0: f64,
}

/// Dense row-major `K × L` complex matrix: row = scale, column = time bin.
#[derive(Debug, Clone, PartialEq)]
pub struct TfMatrix {
    coeffs: Vec<Complex64>,
    grid: ScaleGrid,
    meta: SignalMeta,
}

impl TfMatrix {
    pub fn zeros(grid: ScaleGrid, meta: SignalMeta) -> Self {
        let coeffs = vec![Complex64::new(0.0, 0.0); grid.len() * meta.len];
        Self { coeffs, grid, meta }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>, grid: ScaleGrid, meta: SignalMeta) -> Result<Self> {
        if grid.signal_len() != meta.len {
            return Err(Error::Dimension(format!(
                "grid built for L = {}, signal has L = {}",
                grid.signal_len(),
                meta.len
            )));
        }
        if coeffs.len() != grid.len() * meta.len {
            return Err(Error::Dimension(format!(
                "{} coefficients do not fill a {} x {} matrix",
                coeffs.len(),
                grid.len(),
                meta.len
            )));
        }
        Ok(Self { coeffs, grid, meta })
    }

    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn cols(&self) -> usize {
        self.meta.len
    }

    pub fn grid(&self) -> &ScaleGrid {
        &self.grid
    }

    pub fn meta(&self) -> SignalMeta {
        self.meta
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        let l = self.cols();
        &self.coeffs[k * l..(k + 1) * l]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [Complex64] {
        let l = self.cols();
        &mut self.coeffs[k * l..(k + 1) * l]
    }

    pub fn get(&self, k: usize, n: usize) -> Complex64 {
        self.coeffs[k * self.cols() + n]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn same_shape(&self, other: &TfMatrix) -> Result<()> {
        if self.rows() != other.rows()
            || self.cols() != other.cols()
            || self.grid.first_bin() != other.grid.first_bin()
        {
            return Err(Error::Dimension(format!(
                "{} x {} (first bin {}) vs {} x {} (first bin {})",
                self.rows(),
                self.cols(),
                self.grid.first_bin(),
                other.rows(),
                other.cols(),
                other.grid.first_bin()
            )));
        }
        Ok(())
    }

    /// Entrywise `alpha·self + beta·other`.
    pub fn combine(&self, alpha: Complex64, other: &TfMatrix, beta: Complex64) -> Result<TfMatrix> {
        self.same_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(TfMatrix {
            coeffs,
            grid: self.grid.clone(),
            meta: self.meta,
        })
    }
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl RealMatrix {
    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self {
            data: vec![value; rows * cols],
            rows,
            cols,
        }
    }

    pub fn from_vec(data: Vec<f64>, rows: usize, cols: usize) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} values do not fill a {rows} x {cols} matrix",
                data.len()
            )));
        }
        Ok(Self { data, rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.cols..(k + 1) * self.cols]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.data[k * self.cols..(k + 1) * self.cols]
    }

    pub fn get(&self, k: usize, n: usize) -> f64 {
        self.data[k * self.cols + n]
    }
}
