//! Concentration, envelope-spectrum and reconstruction metrics.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{RealMatrix, TfMatrix};
use crate::signal::DiscreteSignal;
use crate::spectral::Plans;

/// Default Rényi order.
pub const DEFAULT_ALPHA: f64 = 3.0;

fn renyi(energies: impl Iterator<Item = f64> + Clone, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) || alpha == 1.0 {
        return Err(Error::Argument(format!(
            "Rényi order must be positive and not 1, got {alpha}"
        )));
    }
    let total: f64 = energies.clone().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::Undefined("Rényi entropy"));
    }
    let sum: f64 = energies.map(|e| (e / total).powf(alpha)).sum();
    Ok(sum.log2() / (1.0 - alpha))
}

/// `(1/(1-α))·log₂ Σ p^α` with `p = |T|² / Σ|T|²`.
pub fn renyi_entropy(t: &TfMatrix, alpha: f64) -> Result<f64> {
    renyi(t.as_slice().iter().map(|z| z.norm_sqr()), alpha)
}

/// Rényi entropy of a nonnegative energy distribution given directly.
pub fn renyi_entropy_energies(energies: &[f64], alpha: f64) -> Result<f64> {
    if energies.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(Error::Argument(
            "energies must be finite and nonnegative".into(),
        ));
    }
    renyi(energies.iter().copied(), alpha)
}

/// [`renyi_entropy`] for a real matrix, again over squared values.
pub fn renyi_entropy_real(t: &RealMatrix, alpha: f64) -> Result<f64> {
    renyi(t.as_slice().iter().map(|v| v * v), alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfesConfig {
    /// Smallest spacing between detected pulses, seconds.
    pub min_separation_s: f64,
    /// Pulse peaks must exceed this fraction of the envelope maximum.
    pub peak_fraction: f64,
    /// Envelope-spectrum peaks must exceed this fraction of its maximum to
    /// be considered for the dominant frequency.
    pub dominant_fraction: f64,
}

impl Default for TfesConfig {
    fn default() -> Self {
        Self {
            min_separation_s: 2e-3,
            peak_fraction: 0.5,
            dominant_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfesResult {
    /// Largest envelope-spectrum magnitude over nonzero frequencies, per row.
    pub spectrum_peak: Vec<f64>,
    pub best_row: usize,
    /// `|S[best_row, ·]|`.
    pub envelope: Vec<f64>,
    /// One-sided envelope spectrum of the best row, bins `0..=L/2`.
    pub envelope_spectrum: Vec<f64>,
    /// Lowest strong peak of `envelope_spectrum`, Hz.
    pub dominant_hz: f64,
    pub intervals_s: Vec<f64>,
}

fn envelope_spectrum(row: &[Complex64], plans: &Plans) -> Vec<f64> {
    let len = row.len();
    let mean = row.iter().map(|z| z.norm()).sum::<f64>() / len as f64;
    let mut buf: Vec<Complex64> = row
        .iter()
        .map(|z| Complex64::new(z.norm() - mean, 0.0))
        .collect();
    plans.forward_in_place(&mut buf);
    buf[..=len / 2].iter().map(|z| z.norm()).collect()
}

/// Time-frequency envelope spectrum of a squeezed matrix.
///
/// Each row's magnitude has its mean removed and is Fourier transformed;
/// the row with the strongest non-DC component wins.
pub fn tfes(s: &TfMatrix, cfg: &TfesConfig) -> Result<TfesResult> {
    if s.rows() == 0 || s.max_abs() == 0.0 {
        return Err(Error::Undefined("envelope spectrum"));
    }
    let len = s.cols();
    let plans = Plans::new(len);
    let spectrum_peak: Vec<f64> = (0..s.rows())
        .into_par_iter()
        .map(|k| {
            let spec = envelope_spectrum(s.row(k), &plans);
            spec[1..].iter().copied().fold(0.0, f64::max)
        })
        .collect();
    let best_row =
        spectrum_peak.iter().enumerate().fold(
            0,
            |best, (k, &v)| if v > spectrum_peak[best] { k } else { best },
        );
    let envelope: Vec<f64> = s.row(best_row).iter().map(|z| z.norm()).collect();
    let envelope_spectrum = envelope_spectrum(s.row(best_row), &plans);
    let fs = s.meta().fs;
    let dominant_bin = dominant_peak(&envelope_spectrum, cfg.dominant_fraction).unwrap_or(0);
    let dominant_hz = dominant_bin as f64 * fs / len as f64;
    let intervals_s = pulse_intervals(&envelope, fs, cfg)?;
    Ok(TfesResult {
        spectrum_peak,
        best_row,
        envelope,
        envelope_spectrum,
        dominant_hz,
        intervals_s,
    })
}

/// Lowest-frequency local maximum (excluding DC) reaching `fraction` of the
/// largest non-DC value. Harmonics of a pulse train can outgrow the
/// fundamental, so the lowest strong peak is taken rather than the argmax.
fn dominant_peak(spec: &[f64], fraction: f64) -> Option<usize> {
    let top = spec.get(1..)?.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return None;
    }
    (1..spec.len()).find(|&m| {
        let left = spec[m - 1];
        let right = spec.get(m + 1).copied().unwrap_or(f64::NEG_INFINITY);
        spec[m] >= fraction * top && spec[m] > left && spec[m] >= right
    })
}

/// Indices of envelope peaks: local maxima above `peak_fraction` of the
/// maximum, thinned so that no two lie closer than the minimum separation
/// (higher peaks win). Returned in ascending order.
pub fn pulse_peaks(envelope: &[f64], fs: f64, cfg: &TfesConfig) -> Result<Vec<usize>> {
    let min_sep = cfg.min_separation_s * fs;
    if min_sep.is_nan() || min_sep < 2.0 {
        return Err(Error::Argument(format!(
            "minimum separation must span at least 2 samples, got {min_sep}"
        )));
    }
    let top = envelope.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return Ok(Vec::new());
    }
    let level = cfg.peak_fraction * top;
    let mut candidates: Vec<usize> = (0..envelope.len())
        .filter(|&i| {
            let v = envelope[i];
            let left = if i > 0 {
                envelope[i - 1]
            } else {
                f64::NEG_INFINITY
            };
            let right = envelope.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
            v > level && v > left && v >= right
        })
        .collect();
    candidates.sort_by(|&a, &b| envelope[b].total_cmp(&envelope[a]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for c in candidates {
        if kept.iter().all(|&p| (p as f64 - c as f64).abs() >= min_sep) {
            kept.push(c);
        }
    }
    kept.sort_unstable();
    Ok(kept)
}

/// Spacings between consecutive [`pulse_peaks`], seconds. Empty with fewer
/// than two peaks.
pub fn pulse_intervals(envelope: &[f64], fs: f64, cfg: &TfesConfig) -> Result<Vec<f64>> {
    let peaks = pulse_peaks(envelope, fs, cfg)?;
    Ok(peaks
        .windows(2)
        .map(|w| (w[1] - w[0]) as f64 / fs)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalStats {
    pub median_s: f64,
    /// Mean of the intervals that are not outliers.
    pub typical_mean_s: f64,
    /// Positions of intervals deviating from the median by more than the
    /// tolerance.
    pub outliers: Vec<usize>,
}

/// Flags intervals farther than `rel_tol·median` from the median.
pub fn interval_outliers(intervals: &[f64], rel_tol: f64) -> Option<IntervalStats> {
    if intervals.is_empty() {
        return None;
    }
    let mut sorted = intervals.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median_s = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    let (mut sum, mut count, mut outliers) = (0.0, 0usize, Vec::new());
    for (i, &v) in intervals.iter().enumerate() {
        if (v - median_s).abs() > rel_tol * median_s {
            outliers.push(i);
        } else {
            sum += v;
            count += 1;
        }
    }
    Some(IntervalStats {
        median_s,
        typical_mean_s: if count > 0 {
            sum / count as f64
        } else {
            f64::NAN
        },
        outliers,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconError {
    /// `‖x - y‖ / ‖x‖`.
    pub rel_l2: f64,
    /// `-20·log₁₀(rel_l2)`; infinite for a perfect match.
    pub snr_db: f64,
}

pub fn reconstruction_error(x: &DiscreteSignal, y: &DiscreteSignal) -> Result<ReconError> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "signals have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    let norm: f64 = x.samples().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Undefined("reconstruction error"));
    }
    let diff: f64 = x
        .samples()
        .iter()
        .zip(y.samples())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let rel_l2 = diff / norm;
    Ok(ReconError {
        rel_l2,
        snr_db: -20.0 * rel_l2.log10(),
    })
}
