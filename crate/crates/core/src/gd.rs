//! Group-delay and instantaneous-frequency estimates, their iteration, and
//! the closed-form prediction for second-order phase.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{RealMatrix, TfMatrix};
use crate::signal::ChirpModel;
use crate::wavelet::{ScaleGrid, WaveletSpec};

/// Hard threshold on `|W|` below which no estimate is made.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdConfig {
    /// Fraction of the largest magnitude in the whole matrix, in `(0, 1)`.
    Relative(f64),
    /// Absolute magnitude, `>= 0`.
    Absolute(f64),
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig::Relative(1e-3)
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ThresholdConfig::Relative(v) if !(v > 0.0 && v < 1.0) => Err(Error::Range(format!(
                "relative threshold must lie in (0, 1), got {v}"
            ))),
            ThresholdConfig::Absolute(v) if !(v >= 0.0 && v.is_finite()) => Err(Error::Range(
                format!("absolute threshold must be finite and >= 0, got {v}"),
            )),
            _ => Ok(()),
        }
    }

    /// Threshold in magnitude units for a matrix.
    pub fn resolve(&self, w: &TfMatrix) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            ThresholdConfig::Relative(v) => v * w.max_abs(),
            ThresholdConfig::Absolute(v) => v,
        })
    }
}

/// How [`gd_iterate`] composes the delay map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IterMode {
    /// `N - 1` successive lookups.
    Linear,
    /// Repeated doubling, `log₂ N` lookups. `N` must be a power of two.
    Exponential,
}

/// Per-cell delay estimates in sample units. `delays` holds NaN where the
/// mask is false.
#[derive(Debug, Clone)]
pub struct GdMap {
    delays: RealMatrix,
    mask: Vec<bool>,
    threshold: Option<ThresholdConfig>,
}

impl GdMap {
    /// Builds a map from raw parts. Cells with a non-finite delay are
    /// unmasked; unmasked cells are stored as NaN.
    pub fn from_parts(mut delays: RealMatrix, mut mask: Vec<bool>) -> Result<Self> {
        if mask.len() != delays.rows() * delays.cols() {
            return Err(Error::Dimension(format!(
                "mask has {} cells, delays are {} x {}",
                mask.len(),
                delays.rows(),
                delays.cols()
            )));
        }
        for (d, m) in delays.as_mut_slice().iter_mut().zip(mask.iter_mut()) {
            if !d.is_finite() {
                *m = false;
            }
            if !*m {
                *d = f64::NAN;
            }
        }
        Ok(Self {
            delays,
            mask,
            threshold: None,
        })
    }

    /// Threshold the support set was built with, if known.
    pub fn threshold(&self) -> Option<ThresholdConfig> {
        self.threshold
    }

    pub fn rows(&self) -> usize {
        self.delays.rows()
    }

    pub fn cols(&self) -> usize {
        self.delays.cols()
    }

    pub fn delays(&self) -> &RealMatrix {
        &self.delays
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_valid(&self, k: usize, n: usize) -> bool {
        self.mask[k * self.cols() + n]
    }

    pub fn delay(&self, k: usize, n: usize) -> Option<f64> {
        self.is_valid(k, n).then(|| self.delays.get(k, n))
    }

    /// Column a valid cell squeezes to, or `None` if the cell is invalid or
    /// its rounded delay falls outside `[0, L)`.
    pub fn target(&self, k: usize, n: usize) -> Option<usize> {
        self.delay(k, n).and_then(|d| round_index(d, self.cols()))
    }

    /// Number of valid cells.
    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub(crate) fn check_shape(&self, w: &TfMatrix) -> Result<()> {
        if self.rows() != w.rows() || self.cols() != w.cols() {
            return Err(Error::Dimension(format!(
                "GD map is {} x {}, matrix is {} x {}",
                self.rows(),
                self.cols(),
                w.rows(),
                w.cols()
            )));
        }
        Ok(())
    }
}

/// Bitwise equality: same mask and identical delay bits on it.
impl PartialEq for GdMap {
    fn eq(&self, other: &Self) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self.mask == other.mask
            && self
                .delays
                .as_slice()
                .iter()
                .zip(other.delays.as_slice())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Rounds half away from zero and keeps the result only if it indexes `0..len`.
pub(crate) fn round_index(d: f64, len: usize) -> Option<usize> {
    let r = d.round();
    (r >= 0.0 && r < len as f64).then_some(r as usize)
}

/// Cells whose magnitude strictly exceeds the resolved threshold.
pub fn support_set(w: &TfMatrix, cfg: ThresholdConfig) -> Result<Vec<bool>> {
    let thr = cfg.resolve(w)?;
    Ok(w.as_slice().iter().map(|z| z.norm() > thr).collect())
}

fn check_pair(w: &TfMatrix, other: &TfMatrix) -> Result<()> {
    w.same_shape(other)?;
    if w.meta() != other.meta() {
        return Err(Error::Dimension(
            "matrices come from different signals".into(),
        ));
    }
    Ok(())
}

/// `delays[k, n] = n + fs·Re{a_k·Wtg[k, n] / W[k, n]}` on the support set.
pub fn gd_estimate(w: &TfMatrix, wtg: &TfMatrix, cfg: ThresholdConfig) -> Result<GdMap> {
    check_pair(w, wtg)?;
    let mask = support_set(w, cfg)?;
    let (rows, cols) = (w.rows(), w.cols());
    let fs = w.meta().fs;
    let mut delays = RealMatrix::filled(rows, cols, f64::NAN);
    delays
        .as_mut_slice()
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(k, out)| {
            let a = w.grid().scales()[k];
            let (wr, tr) = (w.row(k), wtg.row(k));
            let mrow = &mask[k * cols..(k + 1) * cols];
            for n in 0..cols {
                if mrow[n] {
                    out[n] = n as f64 + fs * (a * tr[n] / wr[n]).re;
                }
            }
        });
    let mut map = GdMap::from_parts(delays, mask)?;
    map.threshold = Some(cfg);
    Ok(map)
}

/// `ω̂[k, n] = ω_k + Re{Wxi[k, n] / (a_k·W[k, n])}` in rad/s, NaN off the
/// support set.
pub fn if_estimate(w: &TfMatrix, wxi: &TfMatrix, cfg: ThresholdConfig) -> Result<RealMatrix> {
    check_pair(w, wxi)?;
    let mask = support_set(w, cfg)?;
    let (rows, cols) = (w.rows(), w.cols());
    let mut out = RealMatrix::filled(rows, cols, f64::NAN);
    out.as_mut_slice()
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(k, row)| {
            let a = w.grid().scales()[k];
            let omega = w.grid().omegas()[k];
            let (wr, xr) = (w.row(k), wxi.row(k));
            for n in 0..cols {
                if mask[k * cols + n] {
                    let v = omega + (xr[n] / (a * wr[n])).re;
                    if v.is_finite() {
                        row[n] = v;
                    }
                }
            }
        });
    Ok(out)
}

/// Rejects `N = 0`, and non-power-of-two `N` in exponential mode.
pub fn check_iterations(n_iter: usize, mode: IterMode) -> Result<()> {
    if n_iter == 0 {
        return Err(Error::Argument("iteration count must be at least 1".into()));
    }
    if mode == IterMode::Exponential && !n_iter.is_power_of_two() {
        return Err(Error::Argument(format!(
            "exponential iteration needs a power-of-two count, got {n_iter}; use linear mode"
        )));
    }
    Ok(())
}

/// N-fold self-composition of the delay map, row by row.
///
/// With `T(n) = round(delays[n])`, the result holds `delays[T^{N-1}(n)]`.
/// A cell is invalid if any cell visited along the way is invalid or rounds
/// outside the record. Linear mode applies `D_{j+1}[n] = D_1[T_j(n)]`;
/// exponential mode applies `D_{2m}[n] = D_m[round(D_m[n])]`. Both visit the
/// same cells and copy the same values, so their results are identical.
pub fn gd_iterate(gd: &GdMap, n_iter: usize, mode: IterMode) -> Result<GdMap> {
    check_iterations(n_iter, mode)?;
    let cols = gd.cols();
    let mut delays = gd.delays.clone();
    if n_iter > 1 && cols > 0 {
        let base = gd.delays.as_slice();
        delays
            .as_mut_slice()
            .par_chunks_mut(cols)
            .enumerate()
            .for_each(|(k, row)| {
                let d1 = &base[k * cols..(k + 1) * cols];
                match mode {
                    IterMode::Linear => iterate_linear(d1, row, n_iter),
                    IterMode::Exponential => iterate_doubling(row, n_iter),
                }
            });
    }
    let mask = delays.as_slice().iter().map(|d| !d.is_nan()).collect();
    let mut map = GdMap::from_parts(delays, mask)?;
    map.threshold = gd.threshold;
    Ok(map)
}

fn lookup(table: &[f64], d: f64) -> f64 {
    match round_index(d, table.len()) {
        Some(j) => table[j],
        None => f64::NAN,
    }
}

fn iterate_linear(d1: &[f64], row: &mut [f64], n_iter: usize) {
    for _ in 1..n_iter {
        for v in row.iter_mut() {
            if !v.is_nan() {
                *v = lookup(d1, *v);
            }
        }
    }
}

fn iterate_doubling(row: &mut [f64], n_iter: usize) {
    let mut m = 1;
    let mut prev = row.to_vec();
    while m < n_iter {
        for (out, &v) in row.iter_mut().zip(&prev) {
            *out = if v.is_nan() {
                f64::NAN
            } else {
                lookup(&prev, v)
            };
        }
        prev.copy_from_slice(row);
        m *= 2;
    }
}

/// Contraction factor `r = φ''² / (φ''² + (a²σ)²)` of one iteration at scale `a`.
pub fn contraction_factor(model: &ChirpModel, spec: &WaveletSpec, a: f64) -> f64 {
    let c = model.phase_curvature();
    let s = a * a * spec.sigma;
    c * c / (c * c + s * s)
}

/// Predicted N-th iterate `-φ'(ω_k) + r^N·(φ'(ω_k) + b)` for every row at
/// column `b_index`, in samples.
pub fn gd_closed_form(
    model: &ChirpModel,
    grid: &ScaleGrid,
    spec: &WaveletSpec,
    b_index: usize,
    n_iter: usize,
) -> Result<Vec<f64>> {
    if b_index >= grid.signal_len() {
        return Err(Error::Range(format!(
            "column {b_index} outside a record of {} samples",
            grid.signal_len()
        )));
    }
    let fs = grid.sample_rate_hz();
    let b = b_index as f64 / fs;
    Ok(grid
        .omegas()
        .iter()
        .zip(grid.scales())
        .map(|(&omega, &a)| {
            let slope = model.phase_slope(omega);
            let r = contraction_factor(model, spec, a);
            fs * (-slope + r.powi(n_iter as i32) * (slope + b))
        })
        .collect())
}

/// [`gd_closed_form`] for every column.
pub fn gd_closed_form_map(
    model: &ChirpModel,
    grid: &ScaleGrid,
    spec: &WaveletSpec,
    n_iter: usize,
) -> Result<RealMatrix> {
    let (rows, cols) = (grid.len(), grid.signal_len());
    let mut out = RealMatrix::filled(rows, cols, 0.0);
    for n in 0..cols {
        let col = gd_closed_form(model, grid, spec, n, n_iter)?;
        for (k, v) in col.into_iter().enumerate() {
            out.row_mut(k)[n] = v;
        }
    }
    Ok(out)
}
