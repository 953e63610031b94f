//! Time-direction synchrosqueezing, its iterated form, energy reassignment,
//! and inversion back to a spectrum.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gd::{gd_iterate, round_index, GdMap, IterMode, ThresholdConfig};
use crate::matrix::{RealMatrix, TfMatrix};
use crate::signal::{ComplexSpectrum, DiscreteSignal};
use crate::wavelet::WaveletSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeMethod {
    Wtsst,
    Wtmsst {
        n: usize,
        mode: IterMode,
    },
    /// Energy reassignment in both time and frequency; not invertible.
    Rm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeResult {
    /// Squeezed matrix. For [`SqueezeMethod::Rm`] the real parts hold energy
    /// and the imaginary parts are zero.
    pub s: TfMatrix,
    pub method: SqueezeMethod,
    pub threshold: Option<ThresholdConfig>,
}

impl SqueezeResult {
    pub fn is_invertible(&self) -> bool {
        self.method != SqueezeMethod::Rm
    }
}

/// `S[k, τ] = Σ W[k, n]` over valid cells with `round(delays[k, n]) = τ`,
/// accumulated in ascending `n`.
pub fn wtsst(w: &TfMatrix, gd: &GdMap) -> Result<SqueezeResult> {
    let s = squeeze(w, gd)?;
    Ok(SqueezeResult {
        s,
        method: SqueezeMethod::Wtsst,
        threshold: gd.threshold(),
    })
}

/// [`wtsst`] driven by the N-fold composed delay map.
pub fn wtmsst(w: &TfMatrix, gd: &GdMap, n: usize, mode: IterMode) -> Result<SqueezeResult> {
    gd.check_shape(w)?;
    let composed = gd_iterate(gd, n, mode)?;
    let s = squeeze(w, &composed)?;
    Ok(SqueezeResult {
        s,
        method: SqueezeMethod::Wtmsst { n, mode },
        threshold: gd.threshold(),
    })
}

fn squeeze(w: &TfMatrix, gd: &GdMap) -> Result<TfMatrix> {
    gd.check_shape(w)?;
    let cols = w.cols();
    let mut s = TfMatrix::zeros(w.grid().clone(), w.meta());
    if cols == 0 {
        return Ok(s);
    }
    s.as_mut_slice()
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(k, out)| {
            for (n, &v) in w.row(k).iter().enumerate() {
                if let Some(tau) = gd.target(k, n) {
                    out[tau] += v;
                }
            }
        });
    Ok(s)
}

/// Reassigns `|W[k, n]|²` to the row nearest `ω̂[k, n]` and column
/// `round(delays[k, n])`. Cells whose estimates leave the grid are dropped.
pub fn rm(w: &TfMatrix, gd: &GdMap, ifm: &RealMatrix) -> Result<SqueezeResult> {
    gd.check_shape(w)?;
    if ifm.rows() != w.rows() || ifm.cols() != w.cols() {
        return Err(Error::Dimension(format!(
            "frequency map is {} x {}, matrix is {} x {}",
            ifm.rows(),
            ifm.cols(),
            w.rows(),
            w.cols()
        )));
    }
    let mut s = TfMatrix::zeros(w.grid().clone(), w.meta());
    let cols = w.cols();
    for k in 0..w.rows() {
        for n in 0..cols {
            let Some(tau) = gd.target(k, n) else { continue };
            let omega = ifm.get(k, n);
            if omega.is_nan() {
                continue;
            }
            if let Some(eta) = w.grid().nearest_row(omega) {
                s.as_mut_slice()[eta * cols + tau] += w.get(k, n).norm_sqr();
            }
        }
    }
    Ok(SqueezeResult {
        s,
        method: SqueezeMethod::Rm,
        threshold: gd.threshold(),
    })
}

/// Largest per-row gap `|Σ_τ S[k, τ] - Σ W[k, n]|` over the cells the map
/// keeps in range. Zero up to accumulation round-off for a faithful squeeze.
pub fn conservation_residual(w: &TfMatrix, gd: &GdMap, s: &TfMatrix) -> Result<f64> {
    gd.check_shape(w)?;
    w.same_shape(s)?;
    Ok((0..w.rows())
        .map(|k| {
            let kept: Complex64 = (0..w.cols())
                .filter(|&n| gd.target(k, n).is_some())
                .map(|n| w.get(k, n))
                .sum();
            let squeezed: Complex64 = s.row(k).iter().sum();
            (kept - squeezed).norm()
        })
        .fold(0.0, f64::max))
}

fn require_invertible(s: &SqueezeResult) -> Result<()> {
    if !s.is_invertible() {
        return Err(Error::Unsupported(
            "reassigned energy cannot be inverted to a signal".into(),
        ));
    }
    Ok(())
}

/// `x̂(ω_k) = Σ_τ S[k, τ] / ĝ(0)` on the grid bins; every other bin is zero.
pub fn reconstruct_spectrum(s: &SqueezeResult, spec: &WaveletSpec) -> Result<ComplexSpectrum> {
    require_invertible(s)?;
    collect_rows(&s.s, spec, |_, _| true)
}

/// Analytic time signal of [`reconstruct_spectrum`]. For a real input, take
/// [`DiscreteSignal::real_from_analytic`] of the result.
pub fn reconstruct_time(s: &SqueezeResult, spec: &WaveletSpec) -> Result<DiscreteSignal> {
    let meta = s.s.meta();
    reconstruct_spectrum(s, spec)?.to_signal(meta.fs, meta.t0)
}

fn collect_rows(
    s: &TfMatrix,
    spec: &WaveletSpec,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<ComplexSpectrum> {
    let grid = s.grid();
    let mut out = ComplexSpectrum::zeros(s.cols(), grid.freq_step_rad());
    let norm = 1.0 / spec.window_peak();
    for k in 0..s.rows() {
        let sum: Complex64 = s
            .row(k)
            .iter()
            .enumerate()
            .filter(|&(tau, _)| keep(k, tau))
            .map(|(_, v)| v)
            .sum();
        out.bins[grid.bin(k)] = sum * norm;
    }
    Ok(out)
}

/// Per-row half-open column intervals `[lo, hi)` selecting one mode.
/// Intervals may extend past the record; they are clipped on use.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBand {
    rows: Vec<Option<(i64, i64)>>,
}

impl ModeBand {
    pub fn new(rows: Vec<Option<(i64, i64)>>) -> Self {
        Self { rows }
    }

    /// Every column of every row.
    pub fn full(rows: usize, cols: usize) -> Self {
        Self::new(vec![Some((0, cols as i64)); rows])
    }

    /// `[round(c) - half_width, round(c) + half_width]` around a per-row
    /// center in samples; NaN centers leave the row unselected.
    pub fn around(centers: &[f64], half_width: usize) -> Self {
        let h = half_width as i64;
        Self::new(
            centers
                .iter()
                .map(|c| {
                    c.is_finite()
                        .then(|| (c.round() as i64 - h, c.round() as i64 + h + 1))
                })
                .collect(),
        )
    }

    /// Greedy ridge: per row, the column of largest `|S|`, widened by
    /// `half_width`. Heuristic; rows with no energy are skipped.
    pub fn ridge(s: &TfMatrix, half_width: usize) -> Self {
        let centers: Vec<f64> = (0..s.rows())
            .map(|k| {
                let row = s.row(k);
                let (best, peak) = row.iter().enumerate().fold((0, 0.0), |acc, (n, z)| {
                    if z.norm() > acc.1 {
                        (n, z.norm())
                    } else {
                        acc
                    }
                });
                if peak > 0.0 {
                    best as f64
                } else {
                    f64::NAN
                }
            })
            .collect();
        Self::around(&centers, half_width)
    }

    pub fn rows(&self) -> &[Option<(i64, i64)>] {
        &self.rows
    }

    fn contains(&self, k: usize, tau: usize) -> bool {
        match self.rows.get(k).copied().flatten() {
            Some((lo, hi)) => (tau as i64) >= lo && (tau as i64) < hi,
            None => false,
        }
    }

    fn selects_any(&self, cols: usize) -> bool {
        self.rows
            .iter()
            .flatten()
            .any(|&(lo, hi)| lo.max(0) < hi.min(cols as i64))
    }
}

/// [`reconstruct_spectrum`] restricted to the banded columns of each row.
pub fn extract_mode(
    s: &SqueezeResult,
    band: &ModeBand,
    spec: &WaveletSpec,
) -> Result<ComplexSpectrum> {
    require_invertible(s)?;
    if band.rows().len() != s.s.rows() {
        return Err(Error::Dimension(format!(
            "band covers {} rows, matrix has {}",
            band.rows().len(),
            s.s.rows()
        )));
    }
    if !band.selects_any(s.s.cols()) {
        return Err(Error::EmptySelection);
    }
    collect_rows(&s.s, spec, |k, tau| band.contains(k, tau))
}

/// Keeps only cells whose rounded delay stays in range; used by callers that
/// need the exact set of coefficients a squeeze can see.
pub fn kept_cells(gd: &GdMap) -> Vec<bool> {
    let cols = gd.cols();
    (0..gd.rows() * cols)
        .map(|i| {
            gd.delay(i / cols, i % cols)
                .and_then(|d| round_index(d, cols))
                .is_some()
        })
        .collect()
}
