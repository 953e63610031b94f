//! Gaussian analysis window and the bin-aligned scale grid.
//!
//! The window is `ĝ(ω) = √(2πσ)·exp(-σω²/2)`, whose time-domain form is
//! `g(t) = exp(-t²/(2σ))` (so `g(0) = 1`). The wavelet is `ψ(t) = g(t)e^{iω₀t}`
//! and scale and analyzed frequency are tied by `ω = ω₀/a`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Level below which `|g|` counts as zero when choosing the support radius.
pub const SUPPORT_LEVEL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletSpec {
    /// Carrier `ω₀` in radians.
    pub omega0: f64,
    /// Gaussian shape parameter `σ`.
    pub sigma: f64,
    /// Effective half-width `d` of the unscaled window: `|g(t)| < 1e-8` for `|t| > d`.
    pub support_radius: f64,
}

impl Default for WaveletSpec {
    fn default() -> Self {
        Self::gaussian(6.0, 1.0).expect("default wavelet parameters are valid")
    }
}

impl WaveletSpec {
    pub fn gaussian(omega0: f64, sigma: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::Argument(format!(
                "omega0 must be positive, got {omega0}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Argument(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let support_radius = (2.0 * sigma * (1.0 / SUPPORT_LEVEL).ln()).sqrt();
        Ok(Self {
            omega0,
            sigma,
            support_radius,
        })
    }

    /// `g(t)`.
    pub fn window_time(&self, t: f64) -> f64 {
        (-t * t / (2.0 * self.sigma)).exp()
    }

    /// `ĝ(0) = √(2πσ)`.
    pub fn window_peak(&self) -> f64 {
        gauss_hat(self, 0.0)
    }
}

/// `ĝ(ω) = √(2πσ)·exp(-σω²/2)`.
pub fn gauss_hat(spec: &WaveletSpec, omega: f64) -> f64 {
    (2.0 * PI * spec.sigma).sqrt() * (-0.5 * spec.sigma * omega * omega).exp()
}

/// Analyzed frequencies on DFT bins `first_bin..=last_bin` of a length-`L`
/// record, together with their scales `a = ω₀/ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleGrid {
    omegas: Vec<f64>,
    scales: Vec<f64>,
    first_bin: usize,
    signal_len: usize,
    sample_rate_hz: f64,
}

impl ScaleGrid {
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn first_bin(&self) -> usize {
        self.first_bin
    }

    /// DFT bin analyzed by row `k`.
    pub fn bin(&self, k: usize) -> usize {
        self.first_bin + k
    }

    pub fn signal_len(&self) -> usize {
        self.signal_len
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// `Δξ = 2π·fs/L`.
    pub fn freq_step_rad(&self) -> f64 {
        2.0 * PI * self.sample_rate_hz / self.signal_len as f64
    }

    pub fn freq_hz(&self, k: usize) -> f64 {
        self.omegas[k] / (2.0 * PI)
    }

    /// Row whose frequency is closest to `omega`, if it lies on the grid.
    pub fn nearest_row(&self, omega: f64) -> Option<usize> {
        let bin = (omega / self.freq_step_rad()).round();
        if !bin.is_finite() || bin < self.first_bin as f64 {
            return None;
        }
        let k = bin as usize - self.first_bin;
        (k < self.len()).then_some(k)
    }

    /// Half-width `a_k·d` of row `k`'s window in samples.
    pub fn support_samples(&self, k: usize, spec: &WaveletSpec) -> f64 {
        self.scales[k] * spec.support_radius * self.sample_rate_hz
    }

    /// Columns whose window `[n - a_k·d, n + a_k·d]` lies inside the record.
    /// Estimates outside this range see wrapped content from the circular
    /// convolution.
    pub fn interior_columns(&self, k: usize, spec: &WaveletSpec) -> std::ops::Range<usize> {
        let half = self.support_samples(k, spec);
        let lo = half.ceil();
        let hi = self.signal_len as f64 - half;
        if lo >= hi {
            return 0..0;
        }
        lo as usize..hi.ceil() as usize
    }

    /// Rows whose window `ĝ(a_k(ξ - ω_k))` has fallen below `level·ĝ(0)`
    /// outside `band` (rad/s), so a spectrum cut off at the band edges looks
    /// untruncated to them. The frequency-domain counterpart of
    /// [`interior_columns`](Self::interior_columns).
    pub fn rows_inside_band(&self, spec: &WaveletSpec, band: [f64; 2], level: f64) -> Vec<usize> {
        let reach = (2.0 * (1.0 / level).ln() / spec.sigma).sqrt();
        (0..self.len())
            .filter(|&k| {
                let (a, w) = (self.scales[k], self.omegas[k]);
                a * (w - band[0]) >= reach && a * (band[1] - w) >= reach
            })
            .collect()
    }
}

/// Linear, bin-aligned grid over bins `k_min..=L/2`.
pub fn make_scale_grid(len: usize, fs: f64, spec: &WaveletSpec, k_min: usize) -> Result<ScaleGrid> {
    if k_min < 1 || 2 * k_min >= len {
        return Err(Error::Range(format!(
            "k_min = {k_min} must satisfy 1 <= k_min < L/2 (L = {len})"
        )));
    }
    make_scale_grid_band(len, fs, spec, k_min, len / 2)
}

/// Grid restricted to bins `k_min..=k_max`.
pub fn make_scale_grid_band(
    len: usize,
    fs: f64,
    spec: &WaveletSpec,
    k_min: usize,
    k_max: usize,
) -> Result<ScaleGrid> {
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Error::Range(format!(
            "sample rate must be positive, got {fs}"
        )));
    }
    if k_min < 1 {
        return Err(Error::Range("k_min must be at least 1".into()));
    }
    if k_max < k_min || k_max > len / 2 {
        return Err(Error::Range(format!(
            "k_max = {k_max} must lie in [{k_min}, {}]",
            len / 2
        )));
    }
    let step = 2.0 * PI * fs / len as f64;
    let omegas: Vec<f64> = (k_min..=k_max).map(|k| k as f64 * step).collect();
    let scales = omegas.iter().map(|w| spec.omega0 / w).collect();
    Ok(ScaleGrid {
        omegas,
        scales,
        first_bin: k_min,
        signal_len: len,
        sample_rate_hz: fs,
    })
}

/// Which moment of the window a transform row uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `ĝ(a(ξ-ω))`.
    Plain,
    /// `a(ξ-ω)·ĝ(a(ξ-ω))`, the `ξĝ` kernel behind the frequency centroid.
    FreqWeighted,
    /// Conjugate transform of `t·g(t)`: `iσ·a(ξ-ω)·ĝ(a(ξ-ω))`. Paired with
    /// the plain row it yields the time centroid `a·W^{tg}/W = t̂ - b`.
    TimeWeighted,
}

/// Frequency-domain multipliers of one scale row on `ξ_m = m·Δξ`,
/// `m = 0..L`. Bins above `L/2` are kept at their positive-frequency
/// position so the row covers one full period of the discrete spectrum.
pub fn window_row(
    spec: &WaveletSpec,
    a: f64,
    weight: Weight,
    len: usize,
    fs: f64,
) -> Vec<Complex64> {
    let step = 2.0 * PI * fs / len as f64;
    let omega = spec.omega0 / a;
    (0..len)
        .map(|m| {
            let u = a * (m as f64 * step - omega);
            let g = gauss_hat(spec, u);
            match weight {
                Weight::Plain => Complex64::new(g, 0.0),
                Weight::FreqWeighted => Complex64::new(u * g, 0.0),
                Weight::TimeWeighted => Complex64::new(0.0, spec.sigma * u * g),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_hat_basics() {
        let spec = WaveletSpec::gaussian(6.0, 1.7).unwrap();
        assert!((gauss_hat(&spec, 0.0) - (2.0 * PI * 1.7f64).sqrt()).abs() < 1e-15);
        for w in [0.3, 1.0, 2.5] {
            assert_eq!(gauss_hat(&spec, w), gauss_hat(&spec, -w));
        }
    }

    #[test]
    fn window_parseval_by_quadrature() {
        // ∫ĝ² dω = 2π ∫g² dt, both by trapezoid on wide grids
        let spec = WaveletSpec::gaussian(6.0, 0.8).unwrap();
        let trap = |f: &dyn Fn(f64) -> f64, lim: f64| {
            let n = 20_000;
            let h = 2.0 * lim / n as f64;
            (0..=n)
                .map(|i| {
                    let x = -lim + i as f64 * h;
                    let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                    w * f(x)
                })
                .sum::<f64>()
                * h
        };
        let freq = trap(&|w| gauss_hat(&spec, w).powi(2), 20.0);
        let time = trap(&|t| spec.window_time(t).powi(2), 20.0);
        assert!((freq - 2.0 * PI * time).abs() / freq < 1e-6);
    }

    #[test]
    fn support_radius_bounds_window() {
        let spec = WaveletSpec::gaussian(6.0, 2.0).unwrap();
        let d = spec.support_radius;
        assert!(spec.window_time(d * 1.0001) < SUPPORT_LEVEL);
        assert!(spec.window_time(d * 0.99) > SUPPORT_LEVEL);
    }

    #[test]
    fn grid_bins_and_scales() {
        let spec = WaveletSpec::default();
        let g = make_scale_grid(200, 200.0, &spec, 1).unwrap();
        assert_eq!(g.len(), 100);
        assert!((g.omegas()[0] - 2.0 * PI).abs() < 1e-12);
        assert!((g.omegas()[99] - 2.0 * PI * 100.0).abs() < 1e-9);
        for k in 0..g.len() {
            assert!((g.scales()[k] * g.omegas()[k] - spec.omega0).abs() < 1e-12);
            assert!((g.freq_hz(k) - (k + 1) as f64).abs() < 1e-9);
        }
        assert!(g.scales().windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn grid_range_checks() {
        let spec = WaveletSpec::default();
        assert!(matches!(
            make_scale_grid(200, 200.0, &spec, 0),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            make_scale_grid(200, 200.0, &spec, 100),
            Err(Error::Range(_))
        ));
        assert!(make_scale_grid(200, 200.0, &spec, 99).is_ok());
        assert!(make_scale_grid_band(200, 200.0, &spec, 10, 101).is_err());
        assert_eq!(
            make_scale_grid_band(200, 200.0, &spec, 10, 20)
                .unwrap()
                .len(),
            11
        );
    }

    #[test]
    fn nearest_row_lookup() {
        let g = make_scale_grid_band(100, 100.0, &WaveletSpec::default(), 5, 20).unwrap();
        let step = g.freq_step_rad();
        assert_eq!(g.nearest_row(5.0 * step), Some(0));
        assert_eq!(g.nearest_row(7.4 * step), Some(2));
        assert_eq!(g.nearest_row(4.4 * step), None);
        assert_eq!(g.nearest_row(20.6 * step), None);
    }

    #[test]
    fn row_shapes() {
        let spec = WaveletSpec::default();
        let (len, fs) = (256, 256.0);
        let grid = make_scale_grid(len, fs, &spec, 1).unwrap();
        for k in [3usize, 40, 90] {
            let a = grid.scales()[k];
            let bin = grid.bin(k);
            let plain = window_row(&spec, a, Weight::Plain, len, fs);
            assert!((plain[bin].re - spec.window_peak()).abs() < 1e-12);
            assert!(plain
                .iter()
                .all(|z| z.im == 0.0 && z.re > 0.0 || z.re == 0.0));
            // unimodal around the center bin
            assert!(plain[..=bin].windows(2).all(|w| w[1].re >= w[0].re));
            assert!(plain[bin..].windows(2).all(|w| w[1].re <= w[0].re));

            let fw = window_row(&spec, a, Weight::FreqWeighted, len, fs);
            assert_eq!(fw[bin].re, 0.0);
            for j in 1..bin.min(len - bin) {
                assert!((fw[bin + j].re + fw[bin - j].re).abs() < 1e-12);
            }
            let tw = window_row(&spec, a, Weight::TimeWeighted, len, fs);
            for m in 0..len {
                assert!((tw[m].im - spec.sigma * fw[m].re).abs() < 1e-15);
                assert_eq!(tw[m].re, 0.0);
            }
        }
    }

    #[test]
    fn plain_row_time_support() {
        let spec = WaveletSpec::default();
        let (len, fs) = (512, 512.0);
        let grid = make_scale_grid(len, fs, &spec, 1).unwrap();
        for k in [20usize, 60, 150] {
            let row = window_row(&spec, grid.scales()[k], Weight::Plain, len, fs);
            let kernel = crate::spectral::ifft(&row);
            let peak = kernel.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let half = grid.support_samples(k, &spec);
            for (s, z) in kernel.iter().enumerate() {
                let lag = s.min(len - s) as f64;
                if lag > half {
                    assert!(z.norm() < 1e-6 * peak, "row {k} lag {lag}");
                }
            }
        }
    }
}
